#include "postmm/smatrix.hpp"

#include "postmm/errors.hpp"

namespace postmm {

ScatteringMatrix::ScatteringMatrix(CMatrix full) : S_(std::move(full)) {
  if (S_.rows() != S_.cols() || S_.rows() % 2 != 0)
    throw InvalidInput("scattering matrix must be square with an even dimension");
  M_ = static_cast<int>(S_.rows() / 2);
}

ScatteringMatrix ScatteringMatrix::identity_through(int M) {
  ScatteringMatrix s(M);
  s.s12().setIdentity();
  s.s21().setIdentity();
  return s;
}

cplx ScatteringMatrix::at(int out_port, int in_port, int mode_out, int mode_in) const {
  if (out_port < 1 || out_port > 2 || in_port < 1 || in_port > 2)
    throw InvalidInput("port index must be 1 or 2");
  if (mode_out < 1 || mode_out > M_ || mode_in < 1 || mode_in > M_)
    throw InvalidInput("mode index out of range");
  return S_((out_port - 1) * M_ + mode_out - 1, (in_port - 1) * M_ + mode_in - 1);
}

CMatrix ScatteringMatrix::leading_block(int P) const {
  if (P < 0 || P > M_) throw InvalidInput("leading block larger than the mode count");
  CMatrix out(2 * P, 2 * P);
  out.topLeftCorner(P, P) = S_.block(0, 0, P, P);
  out.topRightCorner(P, P) = S_.block(0, M_, P, P);
  out.bottomLeftCorner(P, P) = S_.block(M_, 0, P, P);
  out.bottomRightCorner(P, P) = S_.block(M_, M_, P, P);
  return out;
}

}  // namespace postmm
