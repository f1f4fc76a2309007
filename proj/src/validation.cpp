#include "postmm/validation.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/multiprecision/float128.hpp>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <vector>

#include "postmm/errors.hpp"

namespace postmm::validation {

namespace {

// Refinement doubles the panel count up to 2^max_level panels per piece.
constexpr int max_level = 16;

using ldouble = long double;
using lcplx = std::complex<ldouble>;
using quad = boost::multiprecision::float128;

std::string fmt_sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", v);
  return buf;
}

template <class T, class R>
R magnitude(const T& v) {
  using std::abs;
  using boost::multiprecision::abs;
  return abs(v);
}

// Uniform panels of 15/31-point Gauss-Kronrod over each piece between
// consecutive breakpoints, doubled until the summed error estimate drops
// below tol * |value|. Each panel is integrated in a unit variable and its
// estimate rescaled by the panel length.
template <class R, class T, class F>
T integrate_checked(const F& f, const std::vector<R>& breaks, double tol) {
  using GK = boost::math::quadrature::gauss_kronrod<R, 31>;
  if (!(tol >= 1e-14)) throw InvalidInput("oracle tolerance must be >= 1e-14");
  R error = 0;
  R l1 = 0;
  T value{};
  for (int level = 0; level <= max_level; ++level) {
    const long n = 1L << level;
    value = T{};
    error = 0;
    l1 = 0;
    for (std::size_t j = 0; j + 1 < breaks.size(); ++j) {
      const R len = (breaks[j + 1] - breaks[j]) / n;
      for (long i = 0; i < n; ++i) {
        const R x0 = breaks[j] + R(i) * len;
        R e = 0;
        R a1 = 0;
        value += len * GK::integrate([&](R s) -> T { return f(x0 + s * len); }, R(0), R(1), 0, R(0), &e, &a1);
        error += len * e;
        l1 += len * a1;
      }
    }
    // An integral that cancels to exactly zero falls back to the L1 norm.
    const R mag = magnitude<T, R>(value);
    const R scale = mag != 0 ? mag : l1;
    if (error <= R(tol) * scale) return value;
  }
  throw NoConvergence("adaptive quadrature stalled: error estimate " + fmt_sci(static_cast<double>(error)) +
                      " above " + fmt_sci(tol * static_cast<double>(magnitude<T, R>(value))));
}

}  // namespace

double quadrature_oracle(const std::function<double(double)>& f, double lo, double hi, double tol) {
  if (!(lo < hi)) throw InvalidInput("oracle interval needs lo < hi");
  return static_cast<double>(integrate_checked<ldouble, ldouble>(
      [&](ldouble t) -> ldouble { return f(static_cast<double>(t)); }, std::vector<ldouble>{lo, hi}, tol));
}

cplx complex_quadrature_oracle(const std::function<cplx(double)>& f, double lo, double hi, double tol) {
  if (!(lo < hi)) throw InvalidInput("oracle interval needs lo < hi");
  const lcplx z = integrate_checked<ldouble, lcplx>(
      [&](ldouble t) -> lcplx { return lcplx(f(static_cast<double>(t))); }, std::vector<ldouble>{lo, hi}, tol);
  return {static_cast<double>(z.real()), static_cast<double>(z.imag())};
}

double oracle_sine_hat(const SegmentGrid& grid, int k, double p, SineKernel kernel, double a,
                       double tol) {
  grid.validate();
  if (k < 0 || k > grid.K) throw InvalidInput("hat index outside the grid");
  const quad step = (quad(grid.tK) - quad(grid.t0)) / grid.K;
  const quad tk = quad(grid.t0) + k * step;
  const quad pq = p;
  const quad aq = a;
  auto f = [&](quad x) -> quad {
    const quad w = 1 - abs(x - tk) / step;
    const quad arg = kernel == SineKernel::direct ? pq * x : pq * (aq - x);
    return sin(arg) * w;
  };
  std::vector<quad> breaks;
  if (k > 0) breaks.push_back(tk - step);
  breaks.push_back(tk);
  if (k < grid.K) breaks.push_back(tk + step);
  return static_cast<double>(integrate_checked<quad, quad>(f, breaks, tol));
}

cplx oracle_wall_integral(const SegmentGrid& grid, int k, const ModeParams& mode,
                          const ArcGeometry& arc, ExpSign sign, double tol) {
  const cplx g = sign == ExpSign::plus ? mode.gamma : -mode.gamma;
  auto kern = [&](double phi) { return std::exp(g * arc.z(phi)) * std::sin(mode.p * arc.x(phi)); };
  const double tk = grid.node(k);
  cplx acc{};
  if (k > 0) {
    const double lo = grid.node(k - 1);
    acc += complex_quadrature_oracle(
        [&](double phi) { return kern(phi) * ((phi - lo) / (tk - lo)); }, lo, tk, tol);
  }
  if (k < grid.K) {
    const double hi = grid.node(k + 1);
    acc += complex_quadrature_oracle(
        [&](double phi) { return kern(phi) * ((hi - phi) / (hi - tk)); }, tk, hi, tol);
  }
  return mode.p * mode.G * acc;
}

CollocationSolver CollocationSolver::matching(const PostJunction& junction, const Discretization& disc) {
  // Twice the projection rows per segment: K_d on L_d, K_u on L_u, K_c + 1
  // per arc.
  return {junction, 2 * disc.K_d, 2 * disc.K_u, 2 * (disc.K_c + 1)};
}

ScatteringMatrix CollocationSolver::solve(int M, double f) const {
  junction.validate();
  if (n_down < 1 || n_up < 1 || n_arc < 1)
    throw InvalidInput("collocation needs at least one point on every segment");
  const int equations = 2 * n_down + 2 * n_up + 2 * n_arc;
  if (equations <= 2 * M)
    throw Underdetermined("collocation has " + std::to_string(equations) + " equations for " +
                          std::to_string(2 * M) + " unknowns");

  const auto modes = mode_table(junction.wg, M, f);
  const double a = junction.wg.a;
  const double h = junction.h;
  const double R = junction.R;
  const double eta = std::sqrt(junction.wg.mu() / junction.wg.eps());

  CMatrix L = CMatrix::Zero(equations, 2 * M);
  CMatrix Rm = CMatrix::Zero(equations, 2 * M);
  Eigen::Index row = 0;

  // Rows carry sqrt(ds) so the residual approximates the boundary L2 norm.
  // Continuity on the aperture at z = 0: E^I = E^II and H^I_x = -H^II_x'.
  auto straight = [&](double x0, double x1, int n) {
    const double dx = (x1 - x0) / n;
    const double w = std::sqrt(dx);
    for (int i = 0; i < n; ++i) {
      const double x = x0 + (i + 0.5) * dx;
      for (int m = 0; m < M; ++m) {
        const ModeParams& mp = modes[static_cast<std::size_t>(m)];
        const double s1 = std::sin(mp.p * x);
        const double s2 = std::sin(mp.p * (a - x));
        const cplx e = w * mp.p * mp.G;
        const cplx hh = eta * e / mp.Z;
        L(row, m) = hh * s1;
        L(row, M + m) = hh * s2;
        Rm(row, m) = hh * s1;
        Rm(row, M + m) = hh * s2;
        L(row + 1, m) = e * s1;
        L(row + 1, M + m) = -e * s2;
        Rm(row + 1, m) = -e * s1;
        Rm(row + 1, M + m) = e * s2;
      }
      row += 2;
    }
  };
  straight(0.0, h - R, n_down);
  straight(h + R, a, n_up);

  // Vanishing E_y on each half-cylinder, written in that port's own frame.
  const double pi = std::numbers::pi;
  const double dphi = pi / n_arc;
  const double w = std::sqrt(R * dphi);
  for (int port = 0; port < 2; ++port) {
    for (int i = 0; i < n_arc; ++i) {
      const double phi = (port == 0 ? 0.5 * pi : -0.5 * pi) + (i + 0.5) * dphi;
      const double x = port == 0 ? h + R * std::sin(phi) : a - h - R * std::sin(phi);
      const double z = port == 0 ? R * std::cos(phi) : -R * std::cos(phi);
      for (int m = 0; m < M; ++m) {
        const ModeParams& mp = modes[static_cast<std::size_t>(m)];
        const cplx e = w * mp.p * mp.G * std::sin(mp.p * x);
        L(row, port * M + m) = e * std::exp(mp.gamma * z);
        Rm(row, port * M + m) = -e * std::exp(-mp.gamma * z);
      }
      ++row;
    }
  }

  return ScatteringMatrix(solve_least_squares(L, Rm).X);
}

ScatteringMatrix collocation_smatrix(const PostJunction& junction, int M, double f,
                                     const SolverOptions& options) {
  junction.validate();
  return CollocationSolver::matching(junction, options.disc.resolve(junction, M)).solve(M, f);
}

}  // namespace postmm::validation
