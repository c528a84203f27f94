#pragma once

// Dimensionless domain types for pulse propagation in a dense resonant
// two-level medium. Times are in units of 1/omega_c, detunings in units of
// omega_c, and propagation lengths are stored as z/c (a time), so that the
// product omega_c * z reads directly as the dimensionless length
// omega_c z / c.

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace ringing {

using cplx = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;

// Raised when a simulation leaves the representable range (NaN, overflow).
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct MediumParams {
  double omega_c = 1.0;  // cooperative frequency, the unit of the system
  double gamma1 = 1e-3;  // population relaxation
  double gamma2 = 1e-3;  // polarization (coherence) relaxation
  double d_eq = 1.0;     // equilibrium population difference

  // Throws std::invalid_argument on a violated invariant. allow_vacuum admits
  // omega_c = 0 (no medium), used by the propagators.
  void validate(bool allow_vacuum = false) const;
  bool strong_coupling() const { return omega_c > gamma2; }
};

struct PulseSpec {
  double area = 0.49 * kPi;    // Rabi-angle area s
  double spectral_fwhm = 10.0; // FWHM of |F_in(omega)|
  double detuning = 0.0;       // carrier offset from resonance
  double center_time = 2.5;    // t0
  double delay = 0.0;          // tau0, added to the center; negative = earlier

  void validate() const;
  double center() const { return center_time + delay; }
};

struct TimeGrid {
  double t_start = 0.0;
  double dt = 0.05;
  std::size_t n = 8192;

  void validate() const;
  double time(std::size_t j) const { return t_start + static_cast<double>(j) * dt; }
  double t_end() const { return time(n - 1); }
  double duration() const { return static_cast<double>(n) * dt; }
  double nyquist() const { return kPi / dt; }
  bool operator==(const TimeGrid&) const = default;
};

struct ComplexEnvelope {
  TimeGrid grid;
  std::vector<cplx> samples;

  ComplexEnvelope() = default;
  explicit ComplexEnvelope(TimeGrid g);  // zero-filled
  ComplexEnvelope(TimeGrid g, std::vector<cplx> s);

  std::size_t size() const { return samples.size(); }
  // Zeroes every sample with t < 0.
  void enforce_causality();
};

struct BeamGeometry {
  double angle = kPi / 180.0;  // probe-pump intersection angle, radians

  void validate() const;
};

// Gaussian width parameter a from the spectral FWHM: a = 4 sqrt(ln 2) / gamma_sp.
double spectral_fwhm_to_a(double gamma_sp);
// Inverse map; the same functional form, so the pair is an involution.
double a_to_spectral_fwhm(double a);

// Truncated Gaussian input pulse
//   s/(a sqrt(pi)) exp(-((t - t0 - tau0)/a)^2) exp(i Delta t) theta(t).
ComplexEnvelope gaussian_pulse(const PulseSpec& spec, const TimeGrid& grid);

// Trapezoidal integral of the samples.
cplx pulse_area(const ComplexEnvelope& env);
// Trapezoidal integral of |samples|^2.
double pulse_energy(const ComplexEnvelope& env);

// Relative L2 distance ||a - b|| / ||b||; envelopes must share a grid.
double relative_l2(const ComplexEnvelope& a, const ComplexEnvelope& b);

}  // namespace ringing
