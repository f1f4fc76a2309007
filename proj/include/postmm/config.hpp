#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "postmm/network.hpp"

namespace postmm::config {

// Every length in these structs is in millimetres and every frequency in
// GHz, as written in the file. Conversion to SI happens in network() and
// friends.

struct WaveguideSpec {
  std::string preset;  ///< "WR-62" or empty for explicit dimensions
  double a = 0.0;
  double b = 0.0;
  double eps_r = 1.0;
  double mu_r = 1.0;
  bool operator==(const WaveguideSpec&) const = default;
};

/// Exactly one of offset (from the guide axis, h = a/2 + d) or wall (h
/// measured from the x = 0 wall) is set.
struct PostSpec {
  double radius = 0.0;
  std::optional<double> offset;
  std::optional<double> wall;
  bool operator==(const PostSpec&) const = default;
};

struct GuideSpec {
  double length = 0.0;
  bool operator==(const GuideSpec&) const = default;
};

using ElementSpec = std::variant<PostSpec, GuideSpec>;

struct SweepSpec {
  double start = 12.4;
  double stop = 18.0;
  int points = 201;
  bool operator==(const SweepSpec&) const = default;
};

struct NumericsSpec {
  int modes = 60;
  double k_factor = 1.6;
  int k_min = 4;
  /// All three or none.
  std::optional<int> k_d;
  std::optional<int> k_u;
  std::optional<int> k_c;
  int quad_order = 12;
  bool balance_rows = true;
  bool operator==(const NumericsSpec&) const = default;
};

/// Fundamental-mode parameters accepted in OutputSpec::params.
inline const std::vector<std::string> known_params = {"S11", "S21", "S12", "S22"};

struct OutputSpec {
  std::string csv;
  std::string touchstone;
  std::vector<std::string> params = {"S11", "S21", "S12", "S22"};
  bool operator==(const OutputSpec&) const = default;
};

struct RunConfig {
  WaveguideSpec waveguide;
  std::vector<ElementSpec> elements;
  SweepSpec sweep;
  NumericsSpec numerics;
  OutputSpec output;

  Waveguide waveguide_si() const;
  /// Posts and guides in SI units with h = a/2 + offset or h = wall.
  Network network() const;
  SolverOptions solver_options() const;
  double f_start() const { return sweep.start * 1e9; }
  double f_stop() const { return sweep.stop * 1e9; }

  /// Every violated invariant, empty when the config is usable.
  std::vector<std::string> problems() const;
  /// Throws ValidationError listing problems() when non-empty.
  void validate() const;

  bool operator==(const RunConfig&) const = default;
};

/// JSON document (comments allowed). Throws ParseError for malformed text and
/// ValidationError listing every schema or geometry problem.
RunConfig parse_config(std::string_view text);

RunConfig load_config(const std::string& path);

/// Canonical JSON form; parse_config(serialize(c)) == c.
std::string serialize(const RunConfig& cfg);

}  // namespace postmm::config
