#pragma once

// Discrete spectra under the fixed transform convention
//   F(omega) = integral Omega(tau) exp(-i omega tau) dtau,
//   Omega(tau) = (1/2pi) integral F(omega) exp(+i omega tau) domega.
// Phases are referenced to tau = 0, not to the first grid sample.

#include <cstddef>
#include <vector>

#include "ringing/core.hpp"

namespace ringing {

struct Spectrum {
  double omega_start = 0.0;
  double domega = 1.0;
  std::size_t n = 0;
  std::vector<cplx> values;  // ascending omega

  double omega(std::size_t i) const { return omega_start + static_cast<double>(i) * domega; }
  double omega_end() const { return omega(n - 1); }
  // Index of the bin closest to w (clamped).
  std::size_t nearest_index(double w) const;
  // Linear interpolation of the complex values; throws std::out_of_range
  // outside [omega_start, omega_end].
  cplx interpolate(double w) const;
  bool same_grid(const Spectrum& other) const;
};

Spectrum spectrum(const ComplexEnvelope& env);

// Inverse of spectrum(): samples on the given grid (grid.n must equal spec.n
// and the grid must be the one the spectrum was taken on).
ComplexEnvelope inverse_spectrum(const Spectrum& spec, const TimeGrid& grid);

// Spectrum of the same signal with its time origin moved to t_ref, i.e.
// F(omega) exp(+i omega t_ref).
Spectrum shift_reference(const Spectrum& spec, double t_ref);

// (1/2pi) sum |F|^2 domega, equal to pulse energy by Parseval.
double spectral_energy(const Spectrum& spec);

}  // namespace ringing
