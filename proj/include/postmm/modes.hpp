#pragma once

#include <complex>
#include <numbers>
#include <vector>

namespace postmm {

using cplx = std::complex<double>;

namespace phys {
inline constexpr double c0 = 299792458.0;
inline constexpr double mu0 = 4.0e-7 * std::numbers::pi;
inline constexpr double eps0 = 1.0 / (mu0 * c0 * c0);
}  // namespace phys

/// Rectangular guide of width a and height b (meters) filled with a uniform
/// lossless medium.
struct Waveguide {
  double a = 0.0;
  double b = 0.0;
  double eps_r = 1.0;
  double mu_r = 1.0;

  static Waveguide wr62() { return {15.799e-3, 7.899e-3, 1.0, 1.0}; }

  double mu() const { return phys::mu0 * mu_r; }
  double eps() const { return phys::eps0 * eps_r; }

  /// Throws InvalidInput unless a, b > 0 and eps_r, mu_r >= 1.
  void validate() const;

  bool operator==(const Waveguide&) const = default;
};

/// Parameters of the TE_m0 mode at one frequency.
///
/// Fields in a port follow E_y = p G (a e^{-gamma z} + b e^{gamma z}) sin(p x),
/// H_x = p G / Z (b e^{gamma z} - a e^{-gamma z}) sin(p x), time factor
/// e^{+j omega t}. With this G every mode carries unit reciprocity
/// normalization, and a propagating mode carries power |a|^2 / 2.
struct ModeParams {
  int m = 0;
  double p = 0.0;
  cplx gamma;
  cplx G;
  cplx Z;
};

/// Relative cutoff tolerance: |gamma| below gamma_tol_factor * omega / c0 is
/// treated as sitting on the cutoff.
inline constexpr double gamma_tol_factor = 1e-6;

ModeParams mode_params(const Waveguide& wg, int m, double f);

/// mode_params for m = 1..M.
std::vector<ModeParams> mode_table(const Waveguide& wg, int M, double f);

double cutoff_frequency(const Waveguide& wg, int m);

}  // namespace postmm
