#include "postmm/modes.hpp"

#include <cmath>
#include <string>

#include "postmm/errors.hpp"

namespace postmm {

void Waveguide::validate() const {
  if (!(a > 0.0) || !(b > 0.0))
    throw InvalidInput("waveguide dimensions must be positive");
  if (!(eps_r >= 1.0) || !(mu_r >= 1.0))
    throw InvalidInput("eps_r and mu_r must be >= 1");
}

ModeParams mode_params(const Waveguide& wg, int m, double f) {
  if (m < 1) throw InvalidInput("mode index must be >= 1, got " + std::to_string(m));
  if (!(f > 0.0)) throw InvalidInput("frequency must be positive");

  const double omega = 2.0 * std::numbers::pi * f;
  const double mu = wg.mu();
  const double k2 = omega * omega * mu * wg.eps();

  ModeParams mp;
  mp.m = m;
  mp.p = m * std::numbers::pi / wg.a;

  // Principal root, then pick the branch with Re >= 0 and, on the imaginary
  // axis, Im > 0.
  cplx gamma = std::sqrt(cplx(mp.p * mp.p - k2, 0.0));
  if (gamma.real() < 0.0 || (gamma.real() == 0.0 && gamma.imag() < 0.0)) gamma = -gamma;

  const double gamma_tol = gamma_tol_factor * omega / phys::c0;
  if (std::abs(gamma) < gamma_tol)
    throw CutoffSingular("mode " + std::to_string(m) + " is at cutoff at f = " +
                         std::to_string(f) + " Hz");

  const cplx jwmu(0.0, omega * mu);
  mp.gamma = gamma;
  mp.Z = jwmu / gamma;
  mp.G = std::sqrt(2.0 * jwmu / (gamma * wg.a * wg.b * mp.p * mp.p));
  return mp;
}

std::vector<ModeParams> mode_table(const Waveguide& wg, int M, double f) {
  std::vector<ModeParams> out;
  out.reserve(static_cast<std::size_t>(M));
  for (int m = 1; m <= M; ++m) out.push_back(mode_params(wg, m, f));
  return out;
}

double cutoff_frequency(const Waveguide& wg, int m) {
  if (m < 1) throw InvalidInput("mode index must be >= 1, got " + std::to_string(m));
  return m * phys::c0 / (2.0 * wg.a * std::sqrt(wg.eps_r * wg.mu_r));
}

}  // namespace postmm
