#include "ringing/core.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "ringing/warnings.hpp"

namespace ringing {

namespace {

const double kFwhmConstant = 4.0 * std::sqrt(std::log(2.0));

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

}  // namespace

void MediumParams::validate(bool allow_vacuum) const {
  const bool ok = allow_vacuum ? omega_c >= 0.0 : omega_c > 0.0;
  if (!ok || !std::isfinite(omega_c)) {
    throw std::invalid_argument("medium: omega_c must be positive, got " + fmt(omega_c));
  }
  if (!(gamma1 >= 0.0) || !(gamma2 >= 0.0)) {
    throw std::invalid_argument("medium: relaxation rates must be nonnegative");
  }
  if (!(std::abs(d_eq) <= 1.0)) {
    throw std::invalid_argument("medium: |d_eq| must not exceed 1, got " + fmt(d_eq));
  }
}

void PulseSpec::validate() const {
  if (!(spectral_fwhm > 0.0) || !std::isfinite(spectral_fwhm)) {
    throw std::invalid_argument("pulse: spectral_fwhm must be positive, got " + fmt(spectral_fwhm));
  }
  if (!(center_time > 0.0)) {
    throw std::invalid_argument("pulse: center_time must be positive, got " + fmt(center_time));
  }
  if (!std::isfinite(area) || !std::isfinite(detuning) || !std::isfinite(delay)) {
    throw std::invalid_argument("pulse: non-finite parameter");
  }
}

void TimeGrid::validate() const {
  if (!(dt > 0.0) || !std::isfinite(dt)) {
    throw std::invalid_argument("grid: dt must be positive, got " + fmt(dt));
  }
  if (n < 2) throw std::invalid_argument("grid: need at least two samples");
  if (!std::isfinite(t_start)) throw std::invalid_argument("grid: non-finite t_start");
}

ComplexEnvelope::ComplexEnvelope(TimeGrid g) : grid(g), samples(g.n, cplx{}) {}

ComplexEnvelope::ComplexEnvelope(TimeGrid g, std::vector<cplx> s)
    : grid(g), samples(std::move(s)) {
  if (samples.size() != grid.n) {
    throw std::invalid_argument("envelope: sample count does not match grid");
  }
}

void ComplexEnvelope::enforce_causality() {
  for (std::size_t j = 0; j < samples.size(); ++j) {
    if (grid.time(j) < 0.0) samples[j] = cplx{};
  }
}

void BeamGeometry::validate() const {
  if (!(angle >= 0.0) || !(angle < kPi / 2.0)) {
    throw std::invalid_argument("geometry: angle must lie in [0, pi/2), got " + fmt(angle));
  }
}

double spectral_fwhm_to_a(double gamma_sp) {
  if (!(gamma_sp > 0.0)) {
    throw std::domain_error("spectral_fwhm_to_a: width must be positive, got " + fmt(gamma_sp));
  }
  return kFwhmConstant / gamma_sp;
}

double a_to_spectral_fwhm(double a) {
  if (!(a > 0.0)) {
    throw std::domain_error("a_to_spectral_fwhm: a must be positive, got " + fmt(a));
  }
  return kFwhmConstant / a;
}

ComplexEnvelope gaussian_pulse(const PulseSpec& spec, const TimeGrid& grid) {
  spec.validate();
  grid.validate();
  const double a = spectral_fwhm_to_a(spec.spectral_fwhm);
  const double center = spec.center();

  if (grid.t_end() < center + 3.0 * a || grid.t_start > std::max(0.0, center - 3.0 * a)) {
    throw std::invalid_argument("gaussian_pulse: grid [" + fmt(grid.t_start) + ", " +
                                fmt(grid.t_end()) + "] does not contain 6a around center " +
                                fmt(center));
  }
  const double min_center = 3.0 * 2.0 * kPi / spec.spectral_fwhm;
  if (center < min_center) {
    warn("gaussian_pulse: center " + fmt(center) + " < 3*(2pi/gamma_sp) = " + fmt(min_center) +
         "; the step function truncates the pulse");
  }

  const double peak = spec.area / (a * std::sqrt(kPi));
  ComplexEnvelope env(grid);
  for (std::size_t j = 0; j < grid.n; ++j) {
    const double t = grid.time(j);
    if (t < 0.0) continue;
    const double x = (t - center) / a;
    env.samples[j] = peak * std::exp(-x * x) * std::polar(1.0, spec.detuning * t);
  }
  return env;
}

cplx pulse_area(const ComplexEnvelope& env) {
  const auto& s = env.samples;
  if (s.empty()) return {};
  cplx sum{};
  for (const auto& v : s) sum += v;
  sum -= 0.5 * (s.front() + s.back());
  return sum * env.grid.dt;
}

double pulse_energy(const ComplexEnvelope& env) {
  const auto& s = env.samples;
  if (s.empty()) return 0.0;
  double sum = 0.0;
  for (const auto& v : s) sum += std::norm(v);
  sum -= 0.5 * (std::norm(s.front()) + std::norm(s.back()));
  return sum * env.grid.dt;
}

double relative_l2(const ComplexEnvelope& a, const ComplexEnvelope& b) {
  if (a.size() != b.size() || !(a.grid == b.grid)) {
    throw std::invalid_argument("relative_l2: envelopes on different grids");
  }
  double num = 0.0;
  double den = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) {
    num += std::norm(a.samples[j] - b.samples[j]);
    den += std::norm(b.samples[j]);
  }
  if (den == 0.0) return num == 0.0 ? 0.0 : INFINITY;
  return std::sqrt(num / den);
}

}  // namespace ringing
