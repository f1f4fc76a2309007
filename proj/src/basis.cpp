#include "postmm/basis.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "postmm/errors.hpp"

namespace postmm {

namespace {

// Unevaluated sum hi + lo (double-double) for phases and grid positions.
// Overlap between hi and lo is allowed; only limbs are ever rounded.
struct Phase {
  double hi;
  double lo;
  double sin() const { return std::sin(hi) + lo * std::cos(hi); }
  double cos() const { return std::cos(hi) - lo * std::sin(hi); }
};

Phase two_sum(double a, double b) {
  const double s = a + b;
  const double bb = s - a;
  return {s, (a - (s - bb)) + (b - bb)};
}

Phase two_product(double a, double b) {
  const double p = a * b;
  return {p, std::fma(a, b, -p)};
}

Phase add(Phase x, Phase y) {
  Phase s = two_sum(x.hi, y.hi);
  s.lo += x.lo + y.lo;
  return two_sum(s.hi, s.lo);
}

Phase scale(double c, Phase x) {
  Phase p = two_product(c, x.hi);
  p.lo += c * x.lo;
  return two_sum(p.hi, p.lo);
}

// (tK - t0) / K
Phase exact_step(const SegmentGrid& g) {
  const Phase d = two_sum(g.tK, -g.t0);
  const double q = d.hi / g.K;
  const double r = std::fma(-q, static_cast<double>(g.K), d.hi);
  return two_sum(q, (r + d.lo) / g.K);
}

// t0 + k (tK - t0) / K
Phase exact_node(const SegmentGrid& g, int k) {
  if (k == g.K) return {g.tK, 0.0};
  return add({g.t0, 0.0}, scale(k, exact_step(g)));
}

// int_0^1 (1 - t) cos(u t) dt
double one_sided_cos(double u) {
  const double s = u == 0.0 ? 1.0 : std::sin(0.5 * u) / (0.5 * u);
  return 0.5 * s * s;
}

// int_0^1 (1 - t) sin(u t) dt = (u - sin u) / u^2
double one_sided_sin(double u) {
  if (std::abs(u) < 0.5) {
    // u/3! - u^3/5! + u^5/7! - ...
    double term = u / 6.0;
    double sum = term;
    for (int n = 2; n < 12; ++n) {
      term *= -u * u / ((2.0 * n) * (2.0 * n + 1.0));
      sum += term;
    }
    return sum;
  }
  return (u - std::sin(u)) / (u * u);
}

void check_node(const SegmentGrid& grid, int k) {
  if (k < 0 || k > grid.K)
    throw InvalidInput("hat index " + std::to_string(k) + " outside 0.." + std::to_string(grid.K));
}

}  // namespace

void SegmentGrid::validate() const {
  if (K < 1) throw InvalidInput("segment grid needs K >= 1");
  if (!(t0 < tK)) throw InvalidInput("segment grid needs t0 < tK");
}

std::vector<int> SegmentGrid::active_indices() const {
  std::vector<int> out;
  for (int k = include_first ? 0 : 1; k <= (include_last ? K : K - 1); ++k) out.push_back(k);
  return out;
}

double hat_eval(const SegmentGrid& grid, int k, double t) {
  check_node(grid, k);
  const double tk = grid.node(k);
  if (k > 0) {
    const double lo = grid.node(k - 1);
    if (t >= lo && t <= tk) {
      if (k == grid.K) return 1.0 + (t - tk) / (tk - lo);
      return 1.0 - 2.0 * (tk - t) / (grid.node(k + 1) - lo);
    }
  }
  if (k < grid.K) {
    const double hi = grid.node(k + 1);
    if (t >= tk && t <= hi) {
      if (k == 0) return 1.0 - (t - tk) / (hi - tk);
      return 1.0 - 2.0 * (t - tk) / (hi - grid.node(k - 1));
    }
  }
  return 0.0;
}

double sine_hat_integral(const SegmentGrid& grid, int k, double p, SineKernel kernel, double a) {
  check_node(grid, k);
  const Phase step = exact_step(grid);
  const double delta = step.hi + step.lo;
  const Phase xk = exact_node(grid, k);

  // Kernel written as sin(theta + sigma * p * s) with s measured from node k
  // into the support: sigma = +1 towards +x for the direct kernel, flipped
  // for the mirrored one.
  const Phase theta = kernel == SineKernel::direct ? scale(p, xk) : scale(p, add({a, 0.0}, {-xk.hi, -xk.lo}));
  const double sin_t = theta.sin();

  if (k > 0 && k < grid.K) {
    // Both halves: 2 sin(theta) C(u) = delta sin(theta) sinc^2(u / 2).
    const Phase half_u = scale(0.5 * p, step);
    const double sinc = half_u.hi == 0.0 ? 1.0 : half_u.sin() / (half_u.hi + half_u.lo);
    return delta * sin_t * sinc * sinc;
  }

  const double u = p * delta;
  const double c = one_sided_cos(u);
  const double s = one_sided_sin(u);
  const double cos_t = theta.cos();
  const double dir = kernel == SineKernel::direct ? 1.0 : -1.0;
  // Edge hats keep only the half pointing into the segment.
  const double side = k == 0 ? dir : -dir;
  return delta * (sin_t * c + side * cos_t * s);
}

GaussLegendre::GaussLegendre(int order) {
  if (order < 1) throw InvalidInput("Gauss-Legendre order must be >= 1");
  const auto n = static_cast<std::size_t>(order);
  nodes_.resize(n);
  weights_.resize(n);
  for (std::size_t i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0;
      double p1 = 0.0;
      for (std::size_t j = 1; j <= n; ++j) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p2) / j;
      }
      dp = n * (x * p0 - p1) / (x * x - 1.0);
      const double dx = p0 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    // recompute derivative at the converged node
    double p0 = 1.0;
    double p1 = 0.0;
    for (std::size_t j = 1; j <= n; ++j) {
      const double p2 = p1;
      p1 = p0;
      p0 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p2) / j;
    }
    dp = n * (x * p0 - p1) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    nodes_[i] = -x;
    nodes_[n - 1 - i] = x;
    weights_[i] = w;
    weights_[n - 1 - i] = w;
  }
  if (n % 2 == 1) nodes_[n / 2] = 0.0;
}

double ArcGeometry::phi_start() const {
  return side == PortSide::one ? 0.5 * std::numbers::pi : -0.5 * std::numbers::pi;
}

double ArcGeometry::phi_end() const {
  return side == PortSide::one ? 1.5 * std::numbers::pi : 0.5 * std::numbers::pi;
}

double ArcGeometry::x(double phi) const {
  return side == PortSide::one ? h + R * std::sin(phi) : a - h - R * std::sin(phi);
}

double ArcGeometry::z(double phi) const {
  return side == PortSide::one ? R * std::cos(phi) : -R * std::cos(phi);
}

SegmentGrid ArcGeometry::grid(int K) const { return {phi_start(), phi_end(), K, true, true}; }

cplx cylinder_wall_integral(const SegmentGrid& grid, int k, const ModeParams& mode,
                            const ArcGeometry& arc, ExpSign sign, const GaussLegendre& rule) {
  check_node(grid, k);
  const cplx g = sign == ExpSign::plus ? mode.gamma : -mode.gamma;
  auto integrand = [&](double phi) {
    return std::exp(g * arc.z(phi)) * (std::sin(mode.p * arc.x(phi)) * hat_eval(grid, k, phi));
  };
  cplx acc{};
  if (k > 0) acc += rule.integrate(integrand, grid.node(k - 1), grid.node(k));
  if (k < grid.K) acc += rule.integrate(integrand, grid.node(k), grid.node(k + 1));
  return mode.p * mode.G * acc;
}

WallIntegrals cylinder_wall_integrals(const SegmentGrid& grid, const ModeParams& mode,
                                      const ArcGeometry& arc, const GaussLegendre& rule) {
  const auto n = static_cast<std::size_t>(grid.K) + 1;
  WallIntegrals out{std::vector<cplx>(n), std::vector<cplx>(n)};
  const auto& x = rule.nodes();
  const auto& w = rule.weights();
  for (int j = 0; j < grid.K; ++j) {
    const double lo = grid.node(j);
    const double hi = grid.node(j + 1);
    const double half = 0.5 * (hi - lo);
    const double mid = 0.5 * (hi + lo);
    cplx rise_p{}, rise_m{}, fall_p{}, fall_m{};
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double phi = mid + half * x[i];
      const double s = std::sin(mode.p * arc.x(phi)) * w[i];
      const double z = arc.z(phi);
      const cplx ep = std::exp(mode.gamma * z) * s;
      const cplx em = std::exp(-mode.gamma * z) * s;
      const double up = 0.5 * (1.0 + x[i]);  // hat j+1 rising
      const double down = 0.5 * (1.0 - x[i]);  // hat j falling
      rise_p += up * ep;
      rise_m += up * em;
      fall_p += down * ep;
      fall_m += down * em;
    }
    const cplx scale = mode.p * mode.G * half;
    out.plus[static_cast<std::size_t>(j)] += scale * fall_p;
    out.minus[static_cast<std::size_t>(j)] += scale * fall_m;
    out.plus[static_cast<std::size_t>(j) + 1] += scale * rise_p;
    out.minus[static_cast<std::size_t>(j) + 1] += scale * rise_m;
  }
  return out;
}

}  // namespace postmm
