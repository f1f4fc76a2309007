#include "postmm/runner.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>

#include "postmm/errors.hpp"
#include "postmm/validation.hpp"

namespace postmm::runner {

namespace {

std::pair<int, int> ports_of(const std::string& name) {
  // "Sij": output port i, input port j.
  return {name[1] - '0', name[2] - '0'};
}

double db(double mag) { return 20.0 * std::log10(mag); }

double s21_db(const SweepPoint& pt) { return db(std::abs(pt.S.at(2, 1))); }

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InvalidInput("cannot write " + path);
  out << content;
  if (!out) throw InvalidInput("write failed for " + path);
}

}  // namespace

std::string format_csv(const SweepTable& table, const std::vector<std::string>& params) {
  std::string out = "f_Hz";
  for (const auto& p : params) out += fmt::format(",{0}_re,{0}_im,{0}_db,{0}_deg", p);
  out += ",status\n";
  for (const auto& pt : table.points) {
    out += fmt::format("{:.6f}", pt.f);
    for (const auto& p : params) {
      if (!pt.ok) {
        out += ",nan,nan,nan,nan";
        continue;
      }
      const auto [i, j] = ports_of(p);
      const cplx s = pt.S.at(i, j);
      out += fmt::format(",{:.12e},{:.12e},{:.12e},{:.12e}", s.real(), s.imag(), db(std::abs(s)),
                         std::arg(s) * 180.0 / std::numbers::pi);
    }
    out += ",";
    out += pt.ok ? "ok" : pt.error_kind;
    out += "\n";
  }
  return out;
}

std::string format_touchstone(const SweepTable& table) {
  std::string out = "! fundamental TE10 mode, power-normalized waves\n# HZ S RI R 50\n";
  for (const auto& pt : table.points) {
    if (!pt.ok) {
      out += fmt::format("! {:.6f} skipped: {}\n", pt.f, pt.error_kind);
      continue;
    }
    out += fmt::format("{:.6f}", pt.f);
    for (const auto& [i, j] : {std::pair{1, 1}, {2, 1}, {1, 2}, {2, 2}}) {
      const cplx s = pt.S.at(i, j);
      out += fmt::format(" {:.12e} {:.12e}", s.real(), s.imag());
    }
    out += "\n";
  }
  return out;
}

SweepTable run_sweep(const config::RunConfig& cfg, int threads, int modes) {
  cfg.validate();
  return frequency_sweep(cfg.network(), modes > 0 ? modes : cfg.numerics.modes, cfg.solver_options(),
                         cfg.f_start(), cfg.f_stop(), cfg.sweep.points, threads);
}

void write_outputs(const config::RunConfig& cfg, const SweepTable& table) {
  if (!cfg.output.csv.empty()) write_file(cfg.output.csv, format_csv(table, cfg.output.params));
  if (!cfg.output.touchstone.empty()) write_file(cfg.output.touchstone, format_touchstone(table));
}

ConvergenceReport run_convergence(const config::RunConfig& cfg, const std::vector<int>& modes,
                                  double threshold_db, int threads) {
  if (modes.empty()) throw InvalidInput("convergence study needs at least one mode count");
  for (std::size_t i = 1; i < modes.size(); ++i)
    if (!(modes[i] > modes[i - 1])) throw InvalidInput("mode counts must be strictly ascending");
  if (modes.front() < 1) throw InvalidInput("mode counts must be >= 1");

  ConvergenceReport rep;
  rep.modes = modes;
  rep.threshold_db = threshold_db;
  for (int M : modes) rep.sweeps.push_back(run_sweep(cfg, threads, M));

  for (std::size_t i = 1; i < modes.size(); ++i) {
    const auto& lo = rep.sweeps[i - 1].points;
    const auto& hi = rep.sweeps[i].points;
    double delta = 0.0;
    for (std::size_t k = 0; k < lo.size(); ++k) {
      if (!lo[k].ok || !hi[k].ok) {
        delta = std::nan("");
        break;
      }
      delta = std::max(delta, std::abs(s21_db(hi[k]) - s21_db(lo[k])));
    }
    rep.deltas_db.push_back(delta);
    if (!rep.converged_at && delta <= threshold_db) rep.converged_at = modes[i];
  }
  return rep;
}

std::string format_report(const ConvergenceReport& report) {
  std::string out = "M_from,M_to,max_delta_S21_db\n";
  for (std::size_t i = 0; i < report.deltas_db.size(); ++i)
    out += fmt::format("{},{},{:.6e}\n", report.modes[i], report.modes[i + 1], report.deltas_db[i]);
  if (report.deltas_db.empty())
    out += "single mode count: no deltas\n";
  else if (report.converged_at)
    out += fmt::format("converged at M={} (threshold {} dB)\n", *report.converged_at, report.threshold_db);
  else
    out += fmt::format("not converged (threshold {} dB)\n", report.threshold_db);
  return out;
}

double ValidationRow::diff() const {
  return std::max(std::abs(proj_s11 - coll_s11), std::abs(proj_s21 - coll_s21));
}

bool ValidationReport::pass() const {
  if (rows.empty()) return false;
  for (const auto& r : rows)
    if (!(r.diff() <= tolerance)) return false;
  return true;
}

ValidationReport run_validation(const config::RunConfig& cfg, int n_freq, double tolerance) {
  cfg.validate();
  if (n_freq < 1) throw InvalidInput("validation needs at least one frequency");
  const Network net = cfg.network();
  const SolverOptions opt = cfg.solver_options();
  const int M = cfg.numerics.modes;
  const double f0 = cfg.f_start();
  const double f1 = cfg.sweep.points > 1 ? cfg.f_stop() : f0;
  const auto freqs = n_freq == 1 || f0 == f1 ? std::vector<double>{f0} : sweep_frequencies(f0, f1, n_freq);

  ValidationReport rep;
  rep.tolerance = tolerance;
  std::vector<PostJunction> done;
  int index = -1;
  for (const auto& el : net.elements) {
    const auto* j = std::get_if<PostJunction>(&el);
    if (!j) continue;
    ++index;
    if (std::find(done.begin(), done.end(), *j) != done.end()) continue;
    done.push_back(*j);
    for (double f : freqs) {
      const ScatteringMatrix P = solve_junction(*j, M, f, opt).S;
      const ScatteringMatrix C = validation::collocation_smatrix(*j, M, f, opt);
      rep.rows.push_back({index, f, std::abs(P.at(1, 1)), std::abs(P.at(2, 1)), std::abs(C.at(1, 1)),
                          std::abs(C.at(2, 1))});
    }
  }
  if (rep.rows.empty()) throw InvalidInput("config has no posts to validate");
  return rep;
}

std::string format_validation(const ValidationReport& report) {
  std::string out = "post,f_Hz,proj_S11,coll_S11,proj_S21,coll_S21,max_diff\n";
  for (const auto& r : report.rows)
    out += fmt::format("{},{:.6f},{:.9f},{:.9f},{:.9f},{:.9f},{:.3e}\n", r.post, r.f, r.proj_s11, r.coll_s11,
                       r.proj_s21, r.coll_s21, r.diff());
  out += fmt::format("{} (tolerance {})\n", report.pass() ? "PASS" : "FAIL", report.tolerance);
  return out;
}

}  // namespace postmm::runner
