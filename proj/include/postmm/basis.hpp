#pragma once

#include <vector>

#include "postmm/modes.hpp"

namespace postmm {

/// Uniform subdivision of a boundary segment [t0, tK] into K subintervals.
/// The parameter t is a length (straight segments) or an angle (cylinder
/// arcs). The flags mark whether the edge hats alpha_0 / alpha_K carry
/// equations.
struct SegmentGrid {
  double t0 = 0.0;
  double tK = 1.0;
  int K = 1;
  bool include_first = true;
  bool include_last = true;

  double step() const { return (tK - t0) / K; }
  double node(int k) const { return k == K ? tK : t0 + k * step(); }
  int active_count() const { return K + 1 - !include_first - !include_last; }
  std::vector<int> active_indices() const;

  /// Throws InvalidInput unless t0 < tK and K >= 1.
  void validate() const;
};

/// First-order hat alpha_k(t): 1 at node k, linear down to 0 at the
/// neighbouring nodes, zero elsewhere. Edge hats are one-sided.
double hat_eval(const SegmentGrid& grid, int k, double t);

enum class SineKernel {
  direct,    ///< sin(p x)
  mirrored,  ///< sin(p (a - x)), the port-II kernel with x' = a - x
};

/// Closed-form  int_{Omega_k} kernel(x) alpha_k(x) dx  for the sine kernels.
double sine_hat_integral(const SegmentGrid& grid, int k, double p, SineKernel kernel, double a);

/// Gauss-Legendre nodes and weights on [-1, 1].
class GaussLegendre {
 public:
  explicit GaussLegendre(int order);
  int order() const { return static_cast<int>(nodes_.size()); }
  const std::vector<double>& nodes() const { return nodes_; }
  const std::vector<double>& weights() const { return weights_; }

  /// Integrates f over [lo, hi].
  template <class F>
  auto integrate(F&& f, double lo, double hi) const {
    const double half = 0.5 * (hi - lo);
    const double mid = 0.5 * (hi + lo);
    decltype(f(mid)) acc{};
    for (std::size_t i = 0; i < nodes_.size(); ++i) acc += weights_[i] * f(mid + half * nodes_[i]);
    return acc * half;
  }

 private:
  std::vector<double> nodes_;
  std::vector<double> weights_;
};

inline constexpr int default_quadrature_order = 12;

/// Which half-cylinder a wall integral runs over, in that port's own
/// coordinates.
enum class PortSide {
  one,  ///< x = h + R sin(phi), z = R cos(phi), phi in [pi/2, 3pi/2]
  two,  ///< x' = a - h - R sin(phi), z' = -R cos(phi), phi in [-pi/2, pi/2]
};

struct ArcGeometry {
  double a = 0.0;  ///< guide width
  double h = 0.0;  ///< post centre measured from the x = 0 wall
  double R = 0.0;  ///< post radius
  PortSide side = PortSide::one;

  double phi_start() const;
  double phi_end() const;
  double x(double phi) const;
  double z(double phi) const;
  /// Uniform grid over this arc with all K+1 hats active.
  SegmentGrid grid(int K) const;
};

enum class ExpSign { plus, minus };

/// int_{Omega_k} p G e^{+-gamma z(phi)} sin(p x(phi)) alpha_k(phi) dphi by
/// fixed-order Gauss-Legendre on each linear piece of the hat.
cplx cylinder_wall_integral(const SegmentGrid& grid, int k, const ModeParams& mode,
                            const ArcGeometry& arc, ExpSign sign, const GaussLegendre& rule);

/// cylinder_wall_integral for every hat k = 0..K and both signs at once,
/// sharing kernel evaluations between neighbouring hats.
struct WallIntegrals {
  std::vector<cplx> plus;
  std::vector<cplx> minus;
};
WallIntegrals cylinder_wall_integrals(const SegmentGrid& grid, const ModeParams& mode,
                                      const ArcGeometry& arc, const GaussLegendre& rule);

}  // namespace postmm
