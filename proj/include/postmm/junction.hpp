#pragma once

#include <optional>

#include "postmm/basis.hpp"
#include "postmm/modes.hpp"
#include "postmm/smatrix.hpp"

namespace postmm {

/// Zero-length junction holding one full-height conducting post of radius R
/// whose centre lies a distance h from the x = 0 wall. Port I is the z = 0
/// plane looking into z < 0, port II the z' = 0 plane of the mirrored frame
/// x' = a - x, z' = -z.
struct PostJunction {
  Waveguide wg;
  double h = 0.0;
  double R = 0.0;

  /// Throws InvalidInput unless 0 < R < h and R < a - h.
  void validate() const;
  bool operator==(const PostJunction&) const = default;
};

/// Subinterval counts on the straight segments below (K_d) and above (K_u)
/// the post, and on each half-cylinder arc (K_c).
struct Discretization {
  int K_d = 0;
  int K_u = 0;
  int K_c = 0;

  void validate() const;
  /// M < K_d + K_u + K_c + 1
  bool is_definite(int M) const { return M < K_d + K_u + K_c + 1; }
  bool operator==(const Discretization&) const = default;
};

/// How K_d, K_u and K_c are chosen for a junction and mode count.
struct DiscretizationPolicy {
  /// Active test functions per port side, relative to M.
  double factor = 1.6;
  int min_per_segment = 4;
  /// When set, used verbatim for every junction.
  std::optional<Discretization> fixed;

  /// Counts proportional to segment and arc lengths with
  /// K_d + K_u + K_c + 1 >= ceil(factor * M).
  Discretization resolve(const PostJunction& junction, int M) const;
  bool operator==(const DiscretizationPolicy&) const = default;
};

struct SolverOptions {
  DiscretizationPolicy disc;
  int quad_order = default_quadrature_order;
  /// Scale rows to common units before the least-squares solve (see
  /// MatchingSystem::row_weights).
  bool balance_rows = true;
  bool operator==(const SolverOptions&) const = default;
};

/// Which test functions generate equations on each boundary segment.
struct RowPlan {
  SegmentGrid down;  ///< L_d, x in [0, h - R]; wall hat k = 0 dropped
  SegmentGrid up;    ///< L_u, x in [h + R, a]; wall hat k = K_u dropped
  SegmentGrid arc1;  ///< L_c^I in phi
  SegmentGrid arc2;  ///< L_c^II in phi
  int unknowns = 0;

  int down_rows() const { return down.active_count(); }
  int up_rows() const { return up.active_count(); }
  int arc_rows() const { return arc1.active_count(); }
  /// 2 K_d + 2 K_u + 2 (K_c + 1)
  int rows() const { return 2 * down_rows() + 2 * up_rows() + 2 * arc_rows(); }
};

/// Throws Underdetermined when the definiteness condition fails.
RowPlan active_rows(const PostJunction& junction, const Discretization& disc, int M);

/// The projected matching system L b = R a.
struct MatchingSystem {
  CMatrix L;
  CMatrix R;
  RowPlan plan;
  /// Per-row factors that bring every equation to volts: H rows times the
  /// medium impedance sqrt(mu/eps), cylinder rows times R (d phi -> ds),
  /// straight E rows unchanged.
  Eigen::VectorXd row_weights;
};

MatchingSystem assemble(const PostJunction& junction, const Discretization& disc, int M, double f,
                        int quad_order = default_quadrature_order);

struct LeastSquaresResult {
  CMatrix X;
  /// ||L X - R||_F / ||R||_F
  double relative_residual = 0.0;
};

/// Column-by-column least-squares solution of L X = R by column-pivoted
/// Householder QR. Throws RankDeficient if the numerical rank of L is below
/// its column count.
LeastSquaresResult solve_least_squares(const CMatrix& L, const CMatrix& R);

struct JunctionSolution {
  ScatteringMatrix S;
  double relative_residual = 0.0;
  Discretization disc;
  /// max / min row 2-norm of L, for diagnosing E/H row imbalance.
  double row_norm_spread = 0.0;
};

JunctionSolution solve_junction(const PostJunction& junction, const Discretization& disc, int M,
                                double f, int quad_order = default_quadrature_order,
                                bool balance_rows = true);

JunctionSolution solve_junction(const PostJunction& junction, int M, double f,
                                const SolverOptions& options = {});

}  // namespace postmm
