#include "ringing/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "fft.hpp"

namespace ringing {

std::size_t Spectrum::nearest_index(double w) const {
  const double pos = std::round((w - omega_start) / domega);
  if (pos <= 0.0) return 0;
  if (pos >= static_cast<double>(n - 1)) return n - 1;
  return static_cast<std::size_t>(pos);
}

cplx Spectrum::interpolate(double w) const {
  const double pos = (w - omega_start) / domega;
  if (!(pos >= 0.0) || pos > static_cast<double>(n - 1)) {
    throw std::out_of_range("spectrum: frequency outside the grid");
  }
  const auto i = std::min(static_cast<std::size_t>(pos), n - 2);
  const double frac = pos - static_cast<double>(i);
  return values[i] * (1.0 - frac) + values[i + 1] * frac;
}

bool Spectrum::same_grid(const Spectrum& other) const {
  return n == other.n && std::abs(domega - other.domega) <= 1e-12 * domega &&
         std::abs(omega_start - other.omega_start) <= 1e-9 * domega;
}

Spectrum spectrum(const ComplexEnvelope& env) {
  const std::size_t n = env.size();
  const double dt = env.grid.dt;
  std::vector<cplx> work = env.samples;
  detail::fft_forward(work);

  Spectrum out;
  out.n = n;
  out.domega = 2.0 * kPi / (static_cast<double>(n) * dt);
  const std::size_t k0 = (n + 1) / 2;  // first negative-frequency bin
  out.omega_start = detail::bin_frequency(k0 % n, n, dt);
  out.values.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t k = (k0 + i) % n;
    const double w = detail::bin_frequency(k, n, dt);
    out.values[i] = work[k] * dt * std::polar(1.0, -w * env.grid.t_start);
  }
  return out;
}

ComplexEnvelope inverse_spectrum(const Spectrum& spec, const TimeGrid& grid) {
  const std::size_t n = spec.n;
  if (grid.n != n) throw std::invalid_argument("inverse_spectrum: grid size mismatch");
  const std::size_t k0 = (n + 1) / 2;
  std::vector<cplx> work(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t k = (k0 + i) % n;
    const double w = detail::bin_frequency(k, n, grid.dt);
    work[k] = spec.values[i] * std::polar(1.0, w * grid.t_start);
  }
  detail::fft_backward(work);
  const double scale = 1.0 / (static_cast<double>(n) * grid.dt);
  for (auto& v : work) v *= scale;
  return ComplexEnvelope(grid, std::move(work));
}

Spectrum shift_reference(const Spectrum& spec, double t_ref) {
  Spectrum out = spec;
  for (std::size_t i = 0; i < out.n; ++i) {
    out.values[i] *= std::polar(1.0, out.omega(i) * t_ref);
  }
  return out;
}

double spectral_energy(const Spectrum& spec) {
  double sum = 0.0;
  for (const auto& v : spec.values) sum += std::norm(v);
  return sum * spec.domega / (2.0 * kPi);
}

}  // namespace ringing
