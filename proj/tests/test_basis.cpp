#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "postmm/basis.hpp"
#include "postmm/errors.hpp"
#include "postmm/junction.hpp"
#include "postmm/validation.hpp"

using namespace postmm;

namespace {
const Waveguide wr62 = Waveguide::wr62();
constexpr double pi = std::numbers::pi;

double rel(cplx x, cplx ref) { return std::abs(x - ref) / std::abs(ref); }
}  // namespace

TEST_CASE("hat values") {
  const SegmentGrid g{0.0, 1.0, 4};
  CHECK(hat_eval(g, 2, 0.5) == 1.0);
  CHECK(hat_eval(g, 2, 0.625) == doctest::Approx(0.5));
  CHECK(hat_eval(g, 2, 0.375) == doctest::Approx(0.5));
  CHECK(hat_eval(g, 2, 0.2) == 0.0);
  CHECK(hat_eval(g, 2, 0.8) == 0.0);
  CHECK(hat_eval(g, 0, 0.0) == 1.0);
  CHECK(hat_eval(g, 0, 0.125) == doctest::Approx(0.5));
  CHECK(hat_eval(g, 0, 0.3) == 0.0);
  CHECK(hat_eval(g, 4, 1.0) == 1.0);
  CHECK(hat_eval(g, 4, 0.875) == doctest::Approx(0.5));
  CHECK(hat_eval(g, 4, 0.7) == 0.0);
  CHECK_THROWS_AS(hat_eval(g, 5, 0.5), InvalidInput);
  CHECK_THROWS_AS(hat_eval(g, -1, 0.5), InvalidInput);
}

TEST_CASE("grid bookkeeping") {
  const SegmentGrid g{1.0, 3.0, 8, false, true};
  CHECK(g.step() == 0.25);
  CHECK(g.node(0) == 1.0);
  CHECK(g.node(8) == 3.0);
  CHECK(g.active_count() == 8);
  CHECK(g.active_indices().front() == 1);
  CHECK(g.active_indices().back() == 8);
  CHECK((SegmentGrid{0.0, 1.0, 1, false, false}).active_count() == 0);
  CHECK_THROWS_AS((SegmentGrid{1.0, 1.0, 3}).validate(), InvalidInput);
  CHECK_THROWS_AS((SegmentGrid{0.0, 1.0, 0}).validate(), InvalidInput);
}

TEST_CASE("partition of unity") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    const double t0 = -u(rng);
    const double tK = t0 + 0.01 + u(rng);
    const SegmentGrid g{t0, tK, 1 + static_cast<int>(u(rng) * 30)};
    for (int s = 0; s < 40; ++s) {
      const double t = t0 + (tK - t0) * u(rng);
      double sum = 0.0;
      for (int k = 0; k <= g.K; ++k) sum += hat_eval(g, k, t);
      CHECK(sum == doctest::Approx(1.0).epsilon(1e-14));
    }
  }
}

TEST_CASE("sine hat integral against known value") {
  const SegmentGrid g{0.0, 0.01, 10};
  const double I = sine_hat_integral(g, 5, 198.84, SineKernel::direct, wr62.a);
  // High-precision value of the same integral, computed independently.
  CHECK(std::abs(I - 8.355646439590407177e-4) <= 1e-12 * 8.355646439590407177e-4);
  const double oracle = validation::oracle_sine_hat(g, 5, 198.84, SineKernel::direct, wr62.a);
  CHECK(std::abs(I - oracle) <= 1e-12 * std::abs(oracle));
  // Interior closed form.
  const double D = g.step();
  const double p = 198.84;
  CHECK(I == doctest::Approx(2 * std::sin(p * 5 * D) * (1 - std::cos(p * D)) / (p * p * D)).epsilon(1e-13));
}

TEST_CASE("sine hat integral vanishes on a kernel zero") {
  const SegmentGrid g{0.0, wr62.a, 10};
  const double p = 2 * pi / wr62.a;
  const double I = sine_hat_integral(g, 5, p, SineKernel::direct, wr62.a);
  // p t_k is pi only to rounding, so the kernel value there is O(eps).
  CHECK(std::abs(I) <= 4 * std::numeric_limits<double>::epsilon() * pi * g.step());
}

TEST_CASE("sine hat integral matches the oracle on random grids") {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double worst = 0.0;
  for (int trial = 0; trial < 300; ++trial) {
    const double t0 = wr62.a * 0.5 * u(rng);
    const double tK = t0 + (wr62.a - t0) * (0.05 + 0.95 * u(rng));
    const SegmentGrid g{t0, tK, 1 + static_cast<int>(u(rng) * 40)};
    const int k = static_cast<int>(u(rng) * (g.K + 1)) % (g.K + 1);
    const double p = pi / wr62.a * (1.0 + 99.0 * u(rng));
    const auto kernel = trial % 2 ? SineKernel::mirrored : SineKernel::direct;
    const double I = sine_hat_integral(g, k, p, kernel, wr62.a);
    const double ref = validation::oracle_sine_hat(g, k, p, kernel, wr62.a);
    if (std::abs(ref) < 1e-300) continue;
    worst = std::max(worst, std::abs(I - ref) / std::abs(ref));
  }
  CHECK(worst <= 1e-12);
}

TEST_CASE("edge hats match the oracle") {
  const SegmentGrid g{1e-3, 6e-3, 7};
  for (int m : {1, 3, 17, 60}) {
    const double p = m * pi / wr62.a;
    for (int k : {0, 7}) {
      for (auto kernel : {SineKernel::direct, SineKernel::mirrored}) {
        const double I = sine_hat_integral(g, k, p, kernel, wr62.a);
        const double ref = validation::oracle_sine_hat(g, k, p, kernel, wr62.a);
        CHECK(std::abs(I - ref) <= 1e-12 * std::abs(ref));
      }
    }
  }
}

TEST_CASE("mirror identity") {
  const SegmentGrid g{0.0, 7.8995e-3, 23};
  for (int m = 1; m <= 100; ++m) {
    const double p = m * pi / wr62.a;
    const double sign = m % 2 ? 1.0 : -1.0;
    for (int k = 0; k <= g.K; ++k) {
      const double d = sine_hat_integral(g, k, p, SineKernel::direct, wr62.a);
      const double mi = sine_hat_integral(g, k, p, SineKernel::mirrored, wr62.a);
      // A few ulps of the phase m*pi*x/a, scaled by the hat area.
      const double tol = 16 * std::numeric_limits<double>::epsilon() * m * pi * g.step();
      CHECK(std::abs(mi - sign * d) <= tol);
    }
  }
}

TEST_CASE("Gauss-Legendre rule") {
  for (int n : {1, 2, 5, 12, 24}) {
    const GaussLegendre rule(n);
    double wsum = 0.0;
    for (double w : rule.weights()) wsum += w;
    CHECK(wsum == doctest::Approx(2.0).epsilon(1e-14));
    // exact for degree 2n - 1
    const int deg = 2 * n - 1;
    const double I = rule.integrate([&](double x) { return std::pow(x, deg) + std::pow(x, deg - 1); }, 0.0, 1.0);
    CHECK(I == doctest::Approx(1.0 / (deg + 1) + 1.0 / deg).epsilon(1e-13));
  }
  CHECK_THROWS_AS(GaussLegendre(0), InvalidInput);
}

TEST_CASE("arc parameterizations") {
  const ArcGeometry one{wr62.a, 9e-3, 2e-3, PortSide::one};
  const ArcGeometry two{wr62.a, 9e-3, 2e-3, PortSide::two};
  CHECK(one.x(pi) == doctest::Approx(9e-3));
  CHECK(one.z(pi) == doctest::Approx(-2e-3));
  CHECK(one.x(0.5 * pi) == doctest::Approx(11e-3));
  CHECK(two.x(0.0) == doctest::Approx(wr62.a - 9e-3));
  CHECK(two.z(0.0) == doctest::Approx(-2e-3));
  // Port II arc in physical coordinates (x = a - x', z = -z') continues the
  // port I circle onto the z > 0 half.
  for (double phi : {-1.4, -0.6, 0.3, 1.1}) {
    CHECK(wr62.a - two.x(phi) == doctest::Approx(9e-3 + 2e-3 * std::sin(phi)));
    CHECK(-two.z(phi) == doctest::Approx(2e-3 * std::cos(phi)));
    CHECK(-two.z(phi) >= 0.0);
  }
  const auto g = one.grid(16);
  CHECK(g.active_count() == 17);
}

TEST_CASE("cylinder wall integral against known value") {
  const ModeParams m1 = mode_params(wr62, 1, 15e9);
  const ArcGeometry arc{wr62.a, 7.8995e-3, 2e-3, PortSide::one};
  const auto g = arc.grid(16);
  const GaussLegendre rule(default_quadrature_order);
  const cplx I = cylinder_wall_integral(g, 8, m1, arc, ExpSign::plus, rule);
  CHECK(rel(I, cplx(484.6159194963030014, -255.6561212796837427)) <= 1e-10);
  CHECK(rel(I, validation::oracle_wall_integral(g, 8, m1, arc, ExpSign::plus)) <= 1e-10);
}

TEST_CASE("cylinder wall integral thin-post limit") {
  const ModeParams m = mode_params(wr62, 3, 15e9);
  const double h = 6e-3;
  const ArcGeometry arc{wr62.a, h, 1e-9, PortSide::one};
  const auto g = arc.grid(10);
  const GaussLegendre rule(default_quadrature_order);
  const cplx I = cylinder_wall_integral(g, 4, m, arc, ExpSign::minus, rule);
  const cplx limit = m.p * m.G * std::sin(m.p * h) * g.step();
  CHECK(rel(I, limit) <= 1e-6);
}

TEST_CASE("evanescent growth beats decay on the z < 0 arc") {
  const ModeParams m = mode_params(wr62, 8, 15e9);
  const ArcGeometry arc{wr62.a, 7e-3, 2e-3, PortSide::one};
  const auto g = arc.grid(12);
  const GaussLegendre rule(default_quadrature_order);
  for (int k = 1; k < g.K; ++k) {
    const double plus = std::abs(cylinder_wall_integral(g, k, m, arc, ExpSign::plus, rule));
    const double minus = std::abs(cylinder_wall_integral(g, k, m, arc, ExpSign::minus, rule));
    if (std::abs(std::sin(m.p * arc.x(g.node(k)))) > 0.1) CHECK(minus > plus);
  }
}

TEST_CASE("wall integrals converge with quadrature order") {
  const PostJunction j{wr62, 0.5 * wr62.a + 3e-3, 2e-3};
  const Discretization d = DiscretizationPolicy{}.resolve(j, 70);
  const GaussLegendre base(default_quadrature_order);
  const GaussLegendre doubled(2 * default_quadrature_order);
  double worst = 0.0;
  for (auto side : {PortSide::one, PortSide::two}) {
    const ArcGeometry arc{wr62.a, j.h, j.R, side};
    const auto g = arc.grid(d.K_c);
    for (int m = 1; m <= 70; m += 3) {
      const ModeParams mp = mode_params(wr62, m, 15e9);
      const WallIntegrals lo = cylinder_wall_integrals(g, mp, arc, base);
      const WallIntegrals hi = cylinder_wall_integrals(g, mp, arc, doubled);
      for (std::size_t k = 0; k < lo.plus.size(); ++k) {
        worst = std::max(worst, rel(lo.plus[k], hi.plus[k]));
        worst = std::max(worst, rel(lo.minus[k], hi.minus[k]));
      }
    }
  }
  CHECK(worst <= 1e-10);
}

TEST_CASE("batched wall integrals equal the single-hat routine") {
  const ArcGeometry arc{wr62.a, 9e-3, 2e-3, PortSide::two};
  const auto g = arc.grid(9);
  const GaussLegendre rule(default_quadrature_order);
  for (int m : {1, 4, 30}) {
    const ModeParams mp = mode_params(wr62, m, 16e9);
    const WallIntegrals all = cylinder_wall_integrals(g, mp, arc, rule);
    for (int k = 0; k <= g.K; ++k) {
      const auto i = static_cast<std::size_t>(k);
      CHECK(rel(all.plus[i], cylinder_wall_integral(g, k, mp, arc, ExpSign::plus, rule)) <= 1e-13);
      CHECK(rel(all.minus[i], cylinder_wall_integral(g, k, mp, arc, ExpSign::minus, rule)) <= 1e-13);
    }
  }
}
