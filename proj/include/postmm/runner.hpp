#pragma once

#include <optional>
#include <string>
#include <vector>

#include "postmm/config.hpp"
#include "postmm/network.hpp"

namespace postmm::runner {

/// Column order: f_Hz, then for each requested parameter P in config order
/// P_re, P_im, P_db, P_deg, then status ("ok" or the error kind). Failed
/// points carry nan in every numeric column except f_Hz.
std::string format_csv(const SweepTable& table, const std::vector<std::string>& params);

/// 2-port Touchstone (RI, 50 ohm reference) of the fundamental mode. Failed
/// points are left out and listed as comments.
std::string format_touchstone(const SweepTable& table);

/// Sweep as configured; `modes` overrides numerics.modes when > 0.
SweepTable run_sweep(const config::RunConfig& cfg, int threads, int modes = 0);

/// Writes the configured outputs (CSV and optional Touchstone).
void write_outputs(const config::RunConfig& cfg, const SweepTable& table);

struct ConvergenceReport {
  std::vector<int> modes;
  std::vector<SweepTable> sweeps;
  /// deltas_db[i]: max over the band of | |S21|_dB(modes[i+1]) - |S21|_dB(modes[i]) |.
  /// nan when either sweep has a failed point.
  std::vector<double> deltas_db;
  double threshold_db = 0.1;
  /// First modes[i+1] whose delta from modes[i] is within the threshold.
  std::optional<int> converged_at;
};

/// Throws InvalidInput unless modes is non-empty and strictly ascending.
ConvergenceReport run_convergence(const config::RunConfig& cfg, const std::vector<int>& modes,
                                  double threshold_db = 0.1, int threads = 1);

std::string format_report(const ConvergenceReport& report);

struct ValidationRow {
  int post = 0;  ///< index among the config's posts
  double f = 0.0;
  double proj_s11 = 0.0;
  double proj_s21 = 0.0;
  double coll_s11 = 0.0;
  double coll_s21 = 0.0;
  double diff() const;
};

struct ValidationReport {
  std::vector<ValidationRow> rows;
  double tolerance = 1e-2;
  bool pass() const;
};

/// Projection vs collocation on every distinct post of the config at
/// `n_freq` frequencies spread evenly over the configured sweep.
ValidationReport run_validation(const config::RunConfig& cfg, int n_freq = 5, double tolerance = 1e-2);

std::string format_validation(const ValidationReport& report);

}  // namespace postmm::runner
