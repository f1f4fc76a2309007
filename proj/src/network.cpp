#include "postmm/network.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <optional>
#include <thread>

#include "postmm/errors.hpp"

namespace postmm {

void Network::validate() const {
  if (elements.empty()) throw InvalidInput("network has no elements");
  wg.validate();
  double gap = 0.0;
  const PostJunction* previous = nullptr;
  for (const auto& el : elements) {
    if (const auto* g = std::get_if<UniformGuide>(&el)) {
      if (!(g->length >= 0.0)) throw InvalidInput("uniform guide length must be >= 0");
      gap += g->length;
      continue;
    }
    const auto& j = std::get<PostJunction>(el);
    if (!(j.wg == wg)) throw InvalidInput("all junctions must share the network waveguide");
    j.validate();
    if (previous && gap < previous->R + j.R)
      throw InvalidInput("adjacent posts overlap: spacing is smaller than the sum of their radii");
    previous = &j;
    gap = 0.0;
  }
}

Network Network::mirrored() const {
  Network out{wg, {}};
  for (auto it = elements.rbegin(); it != elements.rend(); ++it) {
    if (const auto* j = std::get_if<PostJunction>(&*it)) {
      PostJunction m = *j;
      m.h = j->wg.a - j->h;
      out.elements.emplace_back(m);
    } else {
      out.elements.push_back(*it);
    }
  }
  return out;
}

ScatteringMatrix uniform_guide_smatrix(const Waveguide& wg, double length, int M, double f) {
  if (!(length >= 0.0)) throw InvalidInput("uniform guide length must be >= 0");
  const auto modes = mode_table(wg, M, f);
  ScatteringMatrix S(M);
  for (int m = 0; m < M; ++m) {
    const cplx t = std::exp(-modes[static_cast<std::size_t>(m)].gamma * length);
    S.s21()(m, m) = t;
    S.s12()(m, m) = t;
  }
  return S;
}

ScatteringMatrix cascade(const ScatteringMatrix& left, const ScatteringMatrix& right) {
  if (left.modes() != right.modes()) throw InvalidInput("cascade operands have different mode counts");
  const int M = left.modes();
  const CMatrix I = CMatrix::Identity(M, M);

  Eigen::PartialPivLU<CMatrix> feedback(I - left.s22() * right.s11());
  if (!(feedback.rcond() > 1e-14))
    throw SingularCascade("interior feedback operator is numerically singular");

  const CMatrix XA21 = feedback.solve(CMatrix(left.s21()));
  const CMatrix XA22B12 = feedback.solve(CMatrix(left.s22() * right.s12()));

  ScatteringMatrix out(M);
  out.s11() = left.s11() + left.s12() * (right.s11() * XA21);
  out.s12() = left.s12() * (right.s12() + right.s11() * XA22B12);
  out.s21() = right.s21() * XA21;
  out.s22() = right.s22() + right.s21() * XA22B12;
  return out;
}

ScatteringMatrix shift_reference_planes(const ScatteringMatrix& S, const std::vector<ModeParams>& modes,
                                        double shift1, double shift2) {
  const int M = S.modes();
  if (static_cast<int>(modes.size()) < M) throw InvalidInput("mode table shorter than the S-matrix");
  Eigen::VectorXcd t1(M);
  Eigen::VectorXcd t2(M);
  for (int m = 0; m < M; ++m) {
    t1(m) = std::exp(-modes[static_cast<std::size_t>(m)].gamma * shift1);
    t2(m) = std::exp(-modes[static_cast<std::size_t>(m)].gamma * shift2);
  }
  ScatteringMatrix out(M);
  out.s11() = t1.asDiagonal() * S.s11() * t1.asDiagonal();
  out.s12() = t1.asDiagonal() * S.s12() * t2.asDiagonal();
  out.s21() = t2.asDiagonal() * S.s21() * t1.asDiagonal();
  out.s22() = t2.asDiagonal() * S.s22() * t2.asDiagonal();
  return out;
}

ScatteringMatrix solve_network(const Network& net, int M, double f, const SolverOptions& options) {
  net.validate();
  const auto modes = mode_table(net.wg, M, f);

  // Group as: lead guide, J1, gap, J2, ..., trail guide. Each gap is split in
  // half and absorbed into its two neighbours.
  std::vector<const PostJunction*> junctions;
  std::vector<double> gaps{0.0};
  for (const auto& el : net.elements) {
    if (const auto* g = std::get_if<UniformGuide>(&el)) {
      gaps.back() += g->length;
    } else {
      junctions.push_back(&std::get<PostJunction>(el));
      gaps.push_back(0.0);
    }
  }
  if (junctions.empty()) return uniform_guide_smatrix(net.wg, gaps.back(), M, f);

  std::vector<std::pair<PostJunction, ScatteringMatrix>> cache;
  auto junction_s = [&](const PostJunction& j) -> const ScatteringMatrix& {
    for (const auto& [key, S] : cache)
      if (key == j) return S;
    cache.emplace_back(j, solve_junction(j, M, f, options).S);
    return cache.back().second;
  };

  const std::size_t n = junctions.size();
  std::optional<ScatteringMatrix> acc;
  for (std::size_t i = 0; i < n; ++i) {
    const double shift1 = i == 0 ? gaps[0] : 0.5 * gaps[i];
    const double shift2 = i + 1 == n ? gaps[n] : 0.5 * gaps[i + 1];
    ScatteringMatrix Si = shift_reference_planes(junction_s(*junctions[i]), modes, shift1, shift2);
    acc = acc ? cascade(*acc, Si) : std::move(Si);
  }
  return *acc;
}

std::vector<double> sweep_frequencies(double f_start, double f_stop, int n_points) {
  if (n_points < 1) throw InvalidInput("sweep needs at least one point");
  if (n_points == 1) return {f_start};
  if (!(f_start < f_stop)) throw InvalidInput("sweep needs f_start < f_stop");
  std::vector<double> out(static_cast<std::size_t>(n_points));
  const double step = (f_stop - f_start) / (n_points - 1);
  for (int i = 0; i < n_points; ++i) out[static_cast<std::size_t>(i)] = f_start + i * step;
  out.back() = f_stop;
  return out;
}

SweepTable frequency_sweep(const Network& net, int M, const SolverOptions& options, double f_start,
                           double f_stop, int n_points, int threads) {
  net.validate();
  const auto freqs = sweep_frequencies(f_start, f_stop, n_points);
  SweepTable table;
  table.points.resize(freqs.size());

  auto solve_point = [&](std::size_t i) {
    SweepPoint& pt = table.points[i];
    pt.f = freqs[i];
    try {
      pt.S = solve_network(net, M, pt.f, options);
      pt.ok = true;
    } catch (const Error& e) {
      pt.ok = false;
      pt.error_kind = e.kind();
      pt.error_message = e.what();
    }
  };

  const auto workers = static_cast<std::size_t>(std::clamp(threads, 1, n_points));
  if (workers == 1) {
    for (std::size_t i = 0; i < freqs.size(); ++i) solve_point(i);
    return table;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::jthread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < freqs.size(); i = next++) solve_point(i);
    });
  }
  pool.clear();
  return table;
}

}  // namespace postmm
