#pragma once

#include <string>
#include <variant>
#include <vector>

#include "postmm/junction.hpp"
#include "postmm/smatrix.hpp"

namespace postmm {

/// Empty guide section between reference planes.
struct UniformGuide {
  double length = 0.0;
  bool operator==(const UniformGuide&) const = default;
};

using NetworkElement = std::variant<PostJunction, UniformGuide>;

/// Elements ordered from port I (left) to port II (right). Junction reference
/// planes sit at the post centres, so a centre-to-centre spacing l is exactly
/// a UniformGuide of length l.
struct Network {
  Waveguide wg;
  std::vector<NetworkElement> elements;

  /// Non-empty, shared waveguide, lengths >= 0, junctions valid, and
  /// neighbouring posts separated by at least the sum of their radii.
  void validate() const;

  /// Reversed order with every post mirrored h -> a - h.
  Network mirrored() const;
};

ScatteringMatrix uniform_guide_smatrix(const Waveguide& wg, double length, int M, double f);

/// Redheffer star product: left's port II is connected to right's port I.
ScatteringMatrix cascade(const ScatteringMatrix& left, const ScatteringMatrix& right);

/// Moves the reference planes outward by `shift1` at port I and `shift2` at
/// port II through empty guide. Exactly equal to cascading with reflectionless
/// uniform sections, without a feedback inverse.
ScatteringMatrix shift_reference_planes(const ScatteringMatrix& S, const std::vector<ModeParams>& modes,
                                        double shift1, double shift2);

ScatteringMatrix solve_network(const Network& net, int M, double f, const SolverOptions& options = {});

struct SweepPoint {
  double f = 0.0;
  bool ok = false;
  ScatteringMatrix S;
  std::string error_kind;
  std::string error_message;
};

struct SweepTable {
  std::vector<SweepPoint> points;
};

/// Uniformly spaced frequencies from f_start to f_stop inclusive.
std::vector<double> sweep_frequencies(double f_start, double f_stop, int n_points);

/// Per-point failures are recorded and do not abort the sweep. Points are
/// solved on `threads` workers and returned in frequency order.
SweepTable frequency_sweep(const Network& net, int M, const SolverOptions& options, double f_start,
                           double f_stop, int n_points, int threads = 1);

}  // namespace postmm
