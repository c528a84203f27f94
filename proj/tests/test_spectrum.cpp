#include <cmath>

#include "doctest.h"
#include "ringing/core.hpp"
#include "ringing/spectrum.hpp"

using namespace ringing;

namespace {

ComplexEnvelope test_pulse(double center, double fwhm = 10.0) {
  PulseSpec p;
  p.spectral_fwhm = fwhm;
  p.center_time = center;
  return gaussian_pulse(p, TimeGrid{0.0, 0.05, 4096});
}

}  // namespace

TEST_CASE("spectrum peak and fwhm of a gaussian") {
  const auto env = test_pulse(5.0);
  const auto F = spectrum(env);
  std::size_t imax = 0;
  for (std::size_t i = 0; i < F.n; ++i) {
    if (std::abs(F.values[i]) > std::abs(F.values[imax])) imax = i;
  }
  CHECK(std::abs(F.omega(imax)) < 0.5 * F.domega + 1e-12);

  const double half = 0.5 * std::abs(F.values[imax]);
  std::size_t hi = imax;
  while (std::abs(F.values[hi]) > half) ++hi;
  // Linear interpolation of the half-maximum crossing.
  const double a0 = std::abs(F.values[hi - 1]), a1 = std::abs(F.values[hi]);
  const double w_half = F.omega(hi - 1) + F.domega * (a0 - half) / (a0 - a1);
  CHECK(std::abs(2.0 * w_half - 10.0) < F.domega);
}

TEST_CASE("spectrum of an analytic gaussian") {
  // F(omega) = s exp(-a^2 omega^2 / 4) exp(-i omega t0).
  const auto env = test_pulse(5.0);
  const auto F = spectrum(env);
  const double a = spectral_fwhm_to_a(10.0);
  for (double w : {0.0, 1.0, -3.0, 7.5}) {
    const std::size_t i = F.nearest_index(w);
    const double wi = F.omega(i);
    const cplx exact = 0.49 * kPi * std::exp(-a * a * wi * wi / 4.0) * std::polar(1.0, -wi * 5.0);
    CHECK(std::abs(F.values[i] - exact) < 1e-9);
  }
}

TEST_CASE("shift theorem") {
  const auto e1 = test_pulse(5.0);
  const auto e2 = test_pulse(8.0);
  const auto F1 = spectrum(e1), F2 = spectrum(e2);
  for (std::size_t i = 0; i < F1.n; i += 97) {
    CHECK(std::abs(std::abs(F1.values[i]) - std::abs(F2.values[i])) < 1e-12);
    const cplx expected = F1.values[i] * std::polar(1.0, -F1.omega(i) * 3.0);
    CHECK(std::abs(F2.values[i] - expected) < 1e-10);
  }
}

TEST_CASE("parseval and round trip") {
  const auto env = test_pulse(5.0, 4.0);
  const auto F = spectrum(env);
  double sum_t = 0.0;
  for (const auto& v : env.samples) sum_t += std::norm(v) * env.grid.dt;
  CHECK(spectral_energy(F) == doctest::Approx(sum_t).epsilon(1e-10));

  const auto back = inverse_spectrum(F, env.grid);
  CHECK(relative_l2(back, env) < 1e-10);
}

TEST_CASE("round trip on an offset grid with odd length") {
  TimeGrid g{-1.3, 0.07, 1001};
  ComplexEnvelope env(g);
  for (std::size_t j = 0; j < g.n; ++j) {
    const double t = g.time(j);
    env.samples[j] = cplx(std::exp(-t * t), 0.3 * t * std::exp(-t * t));
  }
  const auto F = spectrum(env);
  CHECK(F.n == 1001);
  CHECK(relative_l2(inverse_spectrum(F, g), env) < 1e-12);
}

TEST_CASE("interpolation bounds and reference shift") {
  const auto F = spectrum(test_pulse(5.0));
  CHECK_THROWS_AS(F.interpolate(F.omega_end() + 1.0), std::out_of_range);
  CHECK_NOTHROW(F.interpolate(0.0));
  const auto G = shift_reference(F, 5.0);
  // A centred real gaussian has a real, positive spectrum about its centre.
  for (std::size_t i = F.nearest_index(-5.0); i < F.nearest_index(5.0); ++i) {
    CHECK(std::abs(G.values[i].imag()) < 1e-9 * std::abs(G.values[i]) + 1e-14);
    CHECK(G.values[i].real() > 0.0);
  }
  CHECK(F.same_grid(G));
}
