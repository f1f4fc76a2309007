#pragma once

#include <functional>

#include "postmm/basis.hpp"
#include "postmm/junction.hpp"
#include "postmm/smatrix.hpp"

namespace postmm::validation {

/// Adaptive Gauss-Kronrod quadrature used as ground truth for the analytic
/// and fixed-order integrals. Throws NoConvergence when the error estimate
/// stays above tol * int|f| at the depth limit. Requires tol >= 1e-14.
double quadrature_oracle(const std::function<double(double)>& f, double lo, double hi, double tol);
cplx complex_quadrature_oracle(const std::function<cplx(double)>& f, double lo, double hi, double tol);

/// Oracle value of sine_hat_integral, integrating the hat support in quad
/// precision.
double oracle_sine_hat(const SegmentGrid& grid, int k, double p, SineKernel kernel, double a,
                       double tol = 1e-14);

/// Oracle value of cylinder_wall_integral.
cplx oracle_wall_integral(const SegmentGrid& grid, int k, const ModeParams& mode,
                          const ArcGeometry& arc, ExpSign sign, double tol = 1e-13);

/// Point-matching counterpart of solve_junction: the same continuity and
/// wall conditions enforced at element midpoints instead of projected on hat
/// functions. Uses none of the hat-integral routines.
struct CollocationSolver {
  PostJunction junction;
  /// Match points on L_d, L_u and each half-cylinder arc.
  int n_down = 0;
  int n_up = 0;
  int n_arc = 0;

  /// Twice the projection solver's equation count on every segment.
  static CollocationSolver matching(const PostJunction& junction, const Discretization& disc);

  int total_points() const { return n_down + n_up + 2 * n_arc; }

  /// Throws Underdetermined unless there are at least 2M match equations.
  ScatteringMatrix solve(int M, double f) const;
};

ScatteringMatrix collocation_smatrix(const PostJunction& junction, int M, double f,
                                     const SolverOptions& options = {});

}  // namespace postmm::validation
