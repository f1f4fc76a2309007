#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <thread>

#include "postmm/config.hpp"
#include "postmm/errors.hpp"
#include "postmm/runner.hpp"

namespace {

enum Exit { ok = 0, bad_input = 1, numerical = 2 };

struct Common {
  std::string config_path;
  int threads = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  int quad_order = 0;
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("config", c.config_path, "Structure description (JSON)")->required();
  cmd->add_option("--threads,-j", c.threads, "Worker threads for frequency points")->check(CLI::PositiveNumber);
  cmd->add_option("--quad-order", c.quad_order, "Gauss-Legendre order per cylinder element")
      ->check(CLI::PositiveNumber);
}

postmm::config::RunConfig load(const Common& c) {
  auto cfg = postmm::config::load_config(c.config_path);
  if (c.quad_order > 0) cfg.numerics.quad_order = c.quad_order;
  cfg.validate();
  return cfg;
}

int failed_points(const postmm::SweepTable& table) {
  int n = 0;
  for (const auto& pt : table.points) {
    if (pt.ok) continue;
    ++n;
    std::cerr << "warning: f = " << pt.f << " Hz failed (" << pt.error_kind << "): " << pt.error_message << "\n";
  }
  return n;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Mode-matching analysis of conducting posts in rectangular waveguide"};
  app.require_subcommand(1);

  Common sweep_opts;
  std::string csv_path;
  std::string touchstone_path;
  auto* sweep = app.add_subcommand("sweep", "Frequency sweep of the configured structure");
  add_common(sweep, sweep_opts);
  sweep->add_option("-o,--output", csv_path, "CSV output path ('-' for stdout)");
  sweep->add_option("--touchstone", touchstone_path, "2-port Touchstone output path");

  Common conv_opts;
  std::vector<int> modes;
  double threshold = 0.1;
  std::string report_path;
  auto* converge = app.add_subcommand("converge", "Compare sweeps over increasing mode counts");
  add_common(converge, conv_opts);
  converge->add_option("--modes,-M", modes, "Ascending mode counts")->required()->expected(1, -1);
  converge->add_option("--threshold", threshold, "Convergence threshold on |S21| in dB");
  converge->add_option("-o,--output", report_path, "Report path (default stdout)");

  Common val_opts;
  int n_freq = 5;
  double tolerance = 1e-2;
  auto* validate = app.add_subcommand("validate", "Projection vs collocation on each post");
  add_common(validate, val_opts);
  validate->add_option("--frequencies", n_freq, "Number of test frequencies")->check(CLI::PositiveNumber);
  validate->add_option("--tolerance", tolerance, "Allowed |S| difference");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*sweep) {
      auto cfg = load(sweep_opts);
      if (!csv_path.empty()) cfg.output.csv = csv_path == "-" ? "" : csv_path;
      if (!touchstone_path.empty()) cfg.output.touchstone = touchstone_path;
      const auto table = postmm::runner::run_sweep(cfg, sweep_opts.threads);
      if (cfg.output.csv.empty()) std::cout << postmm::runner::format_csv(table, cfg.output.params);
      postmm::runner::write_outputs(cfg, table);
      return failed_points(table) > 0 ? numerical : ok;
    }
    if (*converge) {
      const auto cfg = load(conv_opts);
      const auto rep = postmm::runner::run_convergence(cfg, modes, threshold, conv_opts.threads);
      int failed = 0;
      for (const auto& t : rep.sweeps) failed += failed_points(t);
      const std::string text = postmm::runner::format_report(rep);
      if (report_path.empty()) {
        std::cout << text;
      } else {
        std::ofstream out(report_path, std::ios::binary);
        out << text;
        if (!out) throw postmm::InvalidInput("cannot write " + report_path);
      }
      return failed > 0 ? numerical : ok;
    }
    const auto cfg = load(val_opts);
    const auto rep = postmm::runner::run_validation(cfg, n_freq, tolerance);
    std::cout << postmm::runner::format_validation(rep);
    return rep.pass() ? ok : numerical;
  } catch (const postmm::ValidationError& e) {
    std::cerr << "invalid config:\n";
    for (const auto& p : e.problems()) std::cerr << "  " << p << "\n";
    return bad_input;
  } catch (const postmm::ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return bad_input;
  } catch (const postmm::InvalidInput& e) {
    std::cerr << "error: " << e.what() << "\n";
    return bad_input;
  } catch (const postmm::Error& e) {
    std::cerr << "numerical failure (" << e.kind() << "): " << e.what() << "\n";
    return numerical;
  }
}
