#include "postmm/junction.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "postmm/errors.hpp"

namespace postmm {

void PostJunction::validate() const {
  wg.validate();
  if (!(R > 0.0)) throw InvalidInput("post radius must be positive");
  if (!(R < h)) throw InvalidInput("post touches or crosses the x = 0 wall (need R < h)");
  if (!(R < wg.a - h)) throw InvalidInput("post touches or crosses the x = a wall (need R < a - h)");
}

void Discretization::validate() const {
  if (K_d < 1 || K_u < 1 || K_c < 1)
    throw InvalidInput("discretization counts K_d, K_u, K_c must all be >= 1");
}

Discretization DiscretizationPolicy::resolve(const PostJunction& junction, int M) const {
  if (fixed) return *fixed;
  if (M < 1) throw InvalidInput("mode count must be >= 1");
  const double len_d = junction.h - junction.R;
  const double len_u = junction.wg.a - junction.h - junction.R;
  const double len_c = std::numbers::pi * junction.R;
  const double total = len_d + len_u + len_c;
  const double n = std::ceil(factor * M);
  auto share = [&](double len) {
    return std::max(min_per_segment, static_cast<int>(std::ceil(n * len / total)));
  };
  Discretization d{share(len_d), share(len_u), share(len_c)};
  while (!d.is_definite(M)) ++d.K_c;
  return d;
}

RowPlan active_rows(const PostJunction& junction, const Discretization& disc, int M) {
  junction.validate();
  disc.validate();
  if (M < 1) throw InvalidInput("mode count must be >= 1");
  if (!disc.is_definite(M))
    throw Underdetermined("definiteness violated: M = " + std::to_string(M) +
                          " must be < K_d + K_u + K_c + 1 = " +
                          std::to_string(disc.K_d + disc.K_u + disc.K_c + 1));
  const double a = junction.wg.a;
  RowPlan plan;
  plan.down = {0.0, junction.h - junction.R, disc.K_d, false, true};
  plan.up = {junction.h + junction.R, a, disc.K_u, true, false};
  plan.arc1 = ArcGeometry{a, junction.h, junction.R, PortSide::one}.grid(disc.K_c);
  plan.arc2 = ArcGeometry{a, junction.h, junction.R, PortSide::two}.grid(disc.K_c);
  plan.unknowns = 2 * M;
  return plan;
}

MatchingSystem assemble(const PostJunction& junction, const Discretization& disc, int M, double f,
                        int quad_order) {
  RowPlan plan = active_rows(junction, disc, M);
  const auto modes = mode_table(junction.wg, M, f);
  const double a = junction.wg.a;
  const GaussLegendre rule(quad_order);
  const ArcGeometry arc1{a, junction.h, junction.R, PortSide::one};
  const ArcGeometry arc2{a, junction.h, junction.R, PortSide::two};

  const auto rows = plan.rows();
  CMatrix L = CMatrix::Zero(rows, 2 * M);
  CMatrix R = CMatrix::Zero(rows, 2 * M);

  // Straight segment: H rows then E rows. The hat integrals are shared by
  // the E and H blocks; only the modal prefactor differs. Tangential H
  // continuity reads H^I_x = -H^II_x' because the port-II x' axis points
  // along -x.
  auto fill_straight = [&](const SegmentGrid& grid, Eigen::Index row0) {
    const auto hats = grid.active_indices();
    const auto n = static_cast<Eigen::Index>(hats.size());
    for (int m = 0; m < M; ++m) {
      const ModeParams& mp = modes[static_cast<std::size_t>(m)];
      const cplx e_pref = mp.p * mp.G;
      const cplx h_pref = -e_pref / mp.Z;
      for (Eigen::Index i = 0; i < n; ++i) {
        const int k = hats[static_cast<std::size_t>(i)];
        const double direct = sine_hat_integral(grid, k, mp.p, SineKernel::direct, a);
        const double mirrored = sine_hat_integral(grid, k, mp.p, SineKernel::mirrored, a);
        const cplx h1 = h_pref * direct;    // H^{xI}
        const cplx h2 = h_pref * mirrored;  // H^{xII}
        const cplx e1 = e_pref * direct;    // E^{yI}
        const cplx e2 = e_pref * mirrored;  // E^{yII}
        const Eigen::Index hr = row0 + i;
        const Eigen::Index er = row0 + n + i;
        L(hr, m) = -h1;
        L(hr, M + m) = -h2;
        R(hr, m) = -h1;
        R(hr, M + m) = -h2;
        L(er, m) = e1;
        L(er, M + m) = -e2;
        R(er, m) = -e1;
        R(er, M + m) = e2;
      }
    }
    return row0 + 2 * n;
  };

  Eigen::Index row = 0;
  row = fill_straight(plan.down, row);
  row = fill_straight(plan.up, row);

  auto fill_arc = [&](const SegmentGrid& grid, const ArcGeometry& arc, Eigen::Index row0,
                      Eigen::Index col0) {
    const auto hats = grid.active_indices();
    for (int m = 0; m < M; ++m) {
      const WallIntegrals wall =
          cylinder_wall_integrals(grid, modes[static_cast<std::size_t>(m)], arc, rule);
      for (std::size_t i = 0; i < hats.size(); ++i) {
        const auto r = row0 + static_cast<Eigen::Index>(i);
        const auto k = static_cast<std::size_t>(hats[i]);
        L(r, col0 + m) = wall.plus[k];     // E^{ycb}
        R(r, col0 + m) = -wall.minus[k];  // -E^{yca}
      }
    }
    return row0 + static_cast<Eigen::Index>(hats.size());
  };
  row = fill_arc(plan.arc1, arc1, row, 0);
  row = fill_arc(plan.arc2, arc2, row, M);

  Eigen::VectorXd weights = Eigen::VectorXd::Ones(rows);
  const double eta = std::sqrt(junction.wg.mu() / junction.wg.eps());
  weights.segment(0, plan.down_rows()).setConstant(eta);
  weights.segment(2 * plan.down_rows(), plan.up_rows()).setConstant(eta);
  weights.tail(2 * plan.arc_rows()).setConstant(junction.R);

  return {std::move(L), std::move(R), plan, std::move(weights)};
}

LeastSquaresResult solve_least_squares(const CMatrix& L, const CMatrix& R) {
  if (L.rows() != R.rows()) throw InvalidInput("L and R must have the same row count");
  if (L.rows() < L.cols()) throw Underdetermined("least-squares system has fewer rows than unknowns");

  // Column equilibration leaves the least-squares minimizer unchanged.
  Eigen::VectorXd scale = L.colwise().norm().transpose();
  for (Eigen::Index j = 0; j < scale.size(); ++j)
    scale(j) = scale(j) > 0.0 ? 1.0 / scale(j) : 1.0;
  const CMatrix Ls = L * scale.asDiagonal();

  Eigen::ColPivHouseholderQR<CMatrix> qr(Ls);
  if (qr.rank() < L.cols())
    throw RankDeficient("least-squares matrix has numerical rank " + std::to_string(qr.rank()) +
                        " < " + std::to_string(L.cols()));

  LeastSquaresResult out;
  out.X = scale.asDiagonal() * qr.solve(R);
  const double rnorm = R.norm();
  out.relative_residual = rnorm > 0.0 ? (L * out.X - R).norm() / rnorm : 0.0;
  return out;
}

JunctionSolution solve_junction(const PostJunction& junction, const Discretization& disc, int M,
                                double f, int quad_order, bool balance_rows) {
  MatchingSystem sys = assemble(junction, disc, M, f, quad_order);
  if (balance_rows) {
    sys.L = sys.row_weights.asDiagonal() * sys.L;
    sys.R = sys.row_weights.asDiagonal() * sys.R;
  }
  LeastSquaresResult ls = solve_least_squares(sys.L, sys.R);
  JunctionSolution out;
  out.S = ScatteringMatrix(std::move(ls.X));
  out.relative_residual = ls.relative_residual;
  out.disc = disc;
  const Eigen::VectorXd row_norms = sys.L.rowwise().norm();
  out.row_norm_spread = row_norms.maxCoeff() / row_norms.minCoeff();
  return out;
}

JunctionSolution solve_junction(const PostJunction& junction, int M, double f,
                                const SolverOptions& options) {
  junction.validate();
  return solve_junction(junction, options.disc.resolve(junction, M), M, f, options.quad_order,
                        options.balance_rows);
}

}  // namespace postmm
