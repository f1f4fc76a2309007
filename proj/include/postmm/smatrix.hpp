#pragma once

#include <Eigen/Dense>

#include "postmm/modes.hpp"

namespace postmm {

using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

/// Generalized two-port scattering matrix over M modes per port. Maps the
/// incoming amplitudes [a^I; a^II] to the outgoing [b^I; b^II].
class ScatteringMatrix {
 public:
  ScatteringMatrix() = default;
  explicit ScatteringMatrix(int M) : M_(M), S_(CMatrix::Zero(2 * M, 2 * M)) {}
  explicit ScatteringMatrix(CMatrix full);

  static ScatteringMatrix identity_through(int M);

  int modes() const { return M_; }
  const CMatrix& matrix() const { return S_; }
  CMatrix& matrix() { return S_; }

  auto s11() const { return S_.topLeftCorner(M_, M_); }
  auto s12() const { return S_.topRightCorner(M_, M_); }
  auto s21() const { return S_.bottomLeftCorner(M_, M_); }
  auto s22() const { return S_.bottomRightCorner(M_, M_); }
  auto s11() { return S_.topLeftCorner(M_, M_); }
  auto s12() { return S_.topRightCorner(M_, M_); }
  auto s21() { return S_.bottomLeftCorner(M_, M_); }
  auto s22() { return S_.bottomRightCorner(M_, M_); }

  /// Entry (i, j) of block (out_port, in_port), ports and modes 1-based.
  cplx at(int out_port, int in_port, int mode_out = 1, int mode_in = 1) const;

  /// 2P x 2P block of the first P modes at each port.
  CMatrix leading_block(int P) const;

  bool all_finite() const { return S_.allFinite(); }

 private:
  int M_ = 0;
  CMatrix S_;
};

}  // namespace postmm
