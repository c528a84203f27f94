#pragma once

// Linear response of the dense resonant medium: polariton dispersion,
// group velocity, the Bessel ringing kernel, two independent propagators
// (spectral and time-domain convolution), the stationary-phase asymptote and
// the two-path interference spectrum.

#include <vector>

#include "ringing/core.hpp"
#include "ringing/spectrum.hpp"

namespace ringing {

struct DispersionSample {
  double omega = 0.0;
  cplx ck;  // c k(omega), detuning from the resonant wave vector
};

struct CouplingDiagnostics {
  double omega_d = 0.0;  // omega_c^2 z / c
  bool strong_coupling = false;
  bool ringing_observable = false;
};

// c k(omega) = omega - omega_c^2 / (omega - i gamma2). Throws
// std::domain_error at the pole omega = 0, gamma2 = 0.
cplx wavevector(double omega, const MediumParams& medium);
DispersionSample dispersion_sample(double omega, const MediumParams& medium);

// V_g / c from the derivative of Re k(omega).
double group_velocity(double omega, const MediumParams& medium);

// First-kind Bessel function of order one.
double bessel_j1(double x);
// 2 J1(x) / x, continuous through x = 0.
double bessel_j1_ratio(double x);

// Green-function kernel omega_c sqrt(z/(c tau)) J1(2 omega_c sqrt(z tau/c)) exp(-gamma2 tau);
// zero for tau <= 0. kernel_limit() is its tau -> 0+ value omega_D.
double ringing_kernel(double tau, double z, const MediumParams& medium);
double kernel_limit(double z, const MediumParams& medium);

struct FourierOptions {
  // periodic: a plain DFT product. The output spectrum is then exactly
  // H(omega_k) F_in(omega_k) on the bins, but the response is wrapped
  // circularly onto the window.
  // open (default): zero-padded transform with an exponential window
  // exp(-sigma tau), which pushes wrapped contributions below
  // wrap_suppression and yields the causal response on the window.
  bool periodic = false;
  std::size_t pad_factor = 4;
  double wrap_suppression = 1e-14;
};

// Linear propagation through length z via the transfer function
// exp(i omega_c^2 z / (c (omega - i gamma2))) in the retarded frame.
ComplexEnvelope propagate_fourier(const ComplexEnvelope& env_in, double z,
                                  const MediumParams& medium, const FourierOptions& options = {});

// Linear propagation by direct quadrature (trapezoid with the derivative end
// correction at t' = 0) of
//   Omega(tau) = Omega_in(tau) - int_0^tau Omega_in(tau - t') K(t') dt'.
ComplexEnvelope propagate_convolution(const ComplexEnvelope& env_in, double z,
                                      const MediumParams& medium);

// omega_g = omega_c sqrt(z / (c tau)).
double stationary_frequency(double tau, double z, const MediumParams& medium);

// Stationary-phase field at large omega_c z / c for a coherent medium
// (gamma2 = 0). tau and the spectrum phase share one time origin.
cplx asymptotic_field(double tau, double z, const Spectrum& spectrum_in,
                      const MediumParams& medium);

// |F_+(omega)| for the medium output interfering with a vacuum copy delayed
// by tau1; coherent medium only. The omega = 0 bin is returned as 0.
std::vector<double> interference_spectrum(const Spectrum& spectrum_in, double z, double tau1,
                                          const MediumParams& medium);

CouplingDiagnostics coupling_diagnostics(const MediumParams& medium, double z,
                                         double margin = 10.0);

}  // namespace ringing
