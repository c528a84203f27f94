#include "ringing/lindisp.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "fft.hpp"
#include "ringing/warnings.hpp"

namespace ringing {

namespace {

constexpr double kSeriesLimit = 12.0;

void check_propagation_args(const ComplexEnvelope& env, double z, const MediumParams& medium) {
  if (!(z >= 0.0) || !std::isfinite(z)) {
    throw std::invalid_argument("propagation length must be finite and nonnegative");
  }
  if (!(medium.omega_c >= 0.0) || !(medium.gamma2 >= 0.0)) {
    throw std::invalid_argument("propagation: omega_c and gamma2 must be nonnegative");
  }
  env.grid.validate();
  if (env.samples.size() != env.grid.n) {
    throw std::invalid_argument("propagation: envelope length does not match its grid");
  }
}

// sum_k (-1)^k (x/2)^(2k) / (k! (k+1)!), i.e. 2 J1(x) / x.
double j1_ratio_series(double x) {
  const double q = 0.25 * x * x;
  double term = 1.0;
  double sum = 1.0;
  for (int k = 1; k < 200; ++k) {
    term *= -q / (static_cast<double>(k) * static_cast<double>(k + 1));
    sum += term;
    if (std::abs(term) < 1e-17 * std::abs(sum)) break;
  }
  return sum;
}

// Hankel expansion of J1 for x > 0, summed until the terms stop shrinking.
double j1_hankel(double x) {
  constexpr double mu = 4.0;  // 4 nu^2
  double p = 1.0;
  double q = 0.0;
  double a = 1.0;  // a_k / x^k
  double last = 1.0;
  for (int k = 1; k < 200; ++k) {
    const double odd = 2.0 * k - 1.0;
    const double next = a * (mu - odd * odd) / (8.0 * k * x);
    if (std::abs(next) >= std::abs(last) || next == 0.0) break;
    a = next;
    last = next;
    const int sign = ((k / 2) % 2 == 0) ? 1 : -1;
    if (k % 2 == 0) {
      p += sign * a;
    } else {
      q += sign * a;
    }
    if (std::abs(a) < 1e-17) break;
  }
  // chi = x - 3 pi / 4, expanded so large x keeps full phase accuracy.
  const double s = std::sin(x);
  const double c = std::cos(x);
  const double cos_chi = (s - c) * M_SQRT1_2;
  const double sin_chi = -(s + c) * M_SQRT1_2;
  return std::sqrt(2.0 / (kPi * x)) * (p * cos_chi - q * sin_chi);
}

}  // namespace

cplx wavevector(double omega, const MediumParams& medium) {
  if (omega == 0.0 && medium.gamma2 == 0.0) {
    throw std::domain_error("wavevector: pole of c k(omega) at omega = 0 with gamma2 = 0");
  }
  const double wc2 = medium.omega_c * medium.omega_c;
  return cplx(omega, 0.0) - wc2 / cplx(omega, -medium.gamma2);
}

DispersionSample dispersion_sample(double omega, const MediumParams& medium) {
  return {omega, wavevector(omega, medium)};
}

double group_velocity(double omega, const MediumParams& medium) {
  const double w2 = omega * omega;
  const double g2 = medium.gamma2 * medium.gamma2;
  const double wc2 = medium.omega_c * medium.omega_c;
  const double denom = (w2 + g2) * (w2 + g2) + wc2 * (w2 - g2);
  if (denom == 0.0) {
    throw std::domain_error("group_velocity: vanishing denominator");
  }
  return 1.0 - wc2 * (w2 - g2) / denom;
}

double bessel_j1(double x) {
  const double ax = std::abs(x);
  double v;
  if (ax <= kSeriesLimit) {
    v = 0.5 * ax * j1_ratio_series(ax);
  } else {
    v = j1_hankel(ax);
  }
  return x < 0.0 ? -v : v;
}

double bessel_j1_ratio(double x) {
  const double ax = std::abs(x);
  if (ax <= kSeriesLimit) return j1_ratio_series(ax);
  return 2.0 * j1_hankel(ax) / ax;
}

double kernel_limit(double z, const MediumParams& medium) {
  return medium.omega_c * medium.omega_c * z;
}

double ringing_kernel(double tau, double z, const MediumParams& medium) {
  if (!(tau > 0.0) || !(z > 0.0)) return 0.0;
  // omega_c sqrt(z/tau) J1(x) with x = 2 omega_c sqrt(z tau) equals omega_D * 2 J1(x)/x.
  const double x = 2.0 * medium.omega_c * std::sqrt(z * tau);
  return kernel_limit(z, medium) * bessel_j1_ratio(x) * std::exp(-medium.gamma2 * tau);
}

ComplexEnvelope propagate_fourier(const ComplexEnvelope& env_in, double z,
                                  const MediumParams& medium, const FourierOptions& options) {
  check_propagation_args(env_in, z, medium);
  const double strength = medium.omega_c * medium.omega_c * z;
  ComplexEnvelope out = env_in;
  out.enforce_causality();
  if (strength == 0.0) return out;

  const std::size_t n = env_in.grid.n;
  const double dt = env_in.grid.dt;

  if (options.periodic) {
    std::vector<cplx> work = out.samples;
    detail::fft_forward(work);
    std::vector<cplx> transfer(n);
    for (std::size_t k = 0; k < n; ++k) {
      const double w = detail::bin_frequency(k, n, dt);
      if (w == 0.0 && medium.gamma2 == 0.0) continue;
      transfer[k] = std::exp(cplx(0.0, 1.0) * strength / cplx(w, -medium.gamma2));
    }
    if (medium.gamma2 == 0.0) {
      transfer[0] = 0.5 * (transfer[1] + transfer[n - 1]);
      warn("propagate_fourier: transfer pole at omega = 0 (gamma2 = 0); bin replaced by the "
           "neighbour average");
    }
    for (std::size_t k = 0; k < n; ++k) work[k] *= transfer[k];
    detail::fft_backward(work);
    const double scale = 1.0 / static_cast<double>(n);
    for (std::size_t j = 0; j < n; ++j) out.samples[j] = work[j] * scale;
    out.enforce_causality();
    return out;
  }

  if (options.pad_factor < 1 || !(options.wrap_suppression > 0.0 && options.wrap_suppression < 1.0)) {
    throw std::invalid_argument("propagate_fourier: invalid open-mode options");
  }
  const std::size_t m = n * options.pad_factor;
  const double period = static_cast<double>(m) * dt;
  const double sigma = -std::log(options.wrap_suppression) / period;

  std::vector<cplx> work(m, cplx{});
  for (std::size_t j = 0; j < n; ++j) {
    work[j] = out.samples[j] * std::exp(-sigma * static_cast<double>(j) * dt);
  }
  detail::fft_forward(work);
  const double damping = medium.gamma2 + sigma;
  for (std::size_t k = 0; k < m; ++k) {
    const double w = detail::bin_frequency(k, m, dt);
    work[k] *= std::exp(cplx(0.0, 1.0) * strength / cplx(w, -damping));
  }
  detail::fft_backward(work);
  const double scale = 1.0 / static_cast<double>(m);
  for (std::size_t j = 0; j < n; ++j) {
    out.samples[j] = work[j] * scale * std::exp(sigma * static_cast<double>(j) * dt);
  }
  out.enforce_causality();
  return out;
}

ComplexEnvelope propagate_convolution(const ComplexEnvelope& env_in, double z,
                                      const MediumParams& medium) {
  check_propagation_args(env_in, z, medium);
  ComplexEnvelope in = env_in;
  in.enforce_causality();
  if (medium.omega_c * medium.omega_c * z == 0.0) return in;

  const std::size_t n = in.grid.n;
  const double dt = in.grid.dt;
  std::vector<double> kernel(n);
  kernel[0] = kernel_limit(z, medium);
  for (std::size_t m = 1; m < n; ++m) {
    kernel[m] = ringing_kernel(static_cast<double>(m) * dt, z, medium);
  }

  // dK/dt' at t' = 0 from the small-argument expansion of J1.
  const double kernel_slope0 =
      -kernel[0] * (0.5 * medium.omega_c * medium.omega_c * z + medium.gamma2);

  ComplexEnvelope out(in.grid);
  const auto& x = in.samples;
  for (std::size_t j = 1; j < n; ++j) {
    cplx acc = 0.5 * (x[j] * kernel[0] + x[0] * kernel[j]);
    for (std::size_t m = 1; m < j; ++m) acc += x[j - m] * kernel[m];
    acc *= dt;
    // Euler-Maclaurin end correction at t' = 0, where the integrand
    // Omega_in(tau - t') K(t') has slope -Omega_in'(tau) K(0) + Omega_in(tau) K'(0).
    const cplx dx = j + 1 < n ? (x[j + 1] - x[j - 1]) / (2.0 * dt) : (x[j] - x[j - 1]) / dt;
    const cplx f_slope = -dx * kernel[0] + x[j] * kernel_slope0;
    acc += dt * dt / 12.0 * f_slope;
    out.samples[j] = x[j] - acc;
  }
  out.samples[0] = x[0];
  out.enforce_causality();
  return out;
}

double stationary_frequency(double tau, double z, const MediumParams& medium) {
  if (!(tau > 0.0) || !(z > 0.0)) {
    throw std::domain_error("stationary_frequency: tau and z must be positive");
  }
  return medium.omega_c * std::sqrt(z / tau);
}

cplx asymptotic_field(double tau, double z, const Spectrum& spectrum_in,
                      const MediumParams& medium) {
  if (medium.gamma2 != 0.0) {
    throw std::domain_error("asymptotic_field: defined for a coherent medium (gamma2 = 0) only");
  }
  const double wg = stationary_frequency(tau, z, medium);
  const cplx f_plus = spectrum_in.interpolate(wg);
  const cplx f_minus = spectrum_in.interpolate(-wg);
  const double x = 2.0 * medium.omega_c * std::sqrt(z * tau);
  const double prefactor = std::sqrt(x) / (2.0 * tau * std::sqrt(2.0 * kPi));
  const double phase = x + 0.25 * kPi;
  return prefactor * (f_plus * std::polar(1.0, phase) + f_minus * std::polar(1.0, -phase));
}

std::vector<double> interference_spectrum(const Spectrum& spectrum_in, double z, double tau1,
                                          const MediumParams& medium) {
  if (medium.gamma2 != 0.0) {
    throw std::domain_error(
        "interference_spectrum: defined for a coherent medium (gamma2 = 0) only");
  }
  const double strength = medium.omega_c * medium.omega_c * z;
  std::vector<double> out(spectrum_in.n);
  bool hit_pole = false;
  for (std::size_t i = 0; i < spectrum_in.n; ++i) {
    const double w = spectrum_in.omega(i);
    if (w == 0.0) {
      hit_pole = true;
      out[i] = 0.0;
      continue;
    }
    const double phase = 0.5 * (strength / w + w * tau1);
    out[i] = 2.0 * std::abs(spectrum_in.values[i]) * std::abs(std::cos(phase));
  }
  if (hit_pole && strength != 0.0) {
    warn("interference_spectrum: omega = 0 bin lies on the phase pole and was set to 0");
  } else if (hit_pole) {
    // Without a medium the phase has no pole; the bin is regular.
    const std::size_t i0 = spectrum_in.nearest_index(0.0);
    out[i0] = 2.0 * std::abs(spectrum_in.values[i0]);
  }
  return out;
}

CouplingDiagnostics coupling_diagnostics(const MediumParams& medium, double z, double margin) {
  if (!(margin > 0.0)) throw std::invalid_argument("coupling_diagnostics: margin must be positive");
  CouplingDiagnostics d;
  d.omega_d = kernel_limit(z, medium);
  d.strong_coupling = medium.omega_c > medium.gamma2;
  d.ringing_observable = d.omega_d > margin * medium.gamma2;
  return d;
}

}  // namespace ringing
