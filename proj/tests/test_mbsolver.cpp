#include <cmath>

#include "doctest.h"
#include "ringing/core.hpp"
#include "ringing/lindisp.hpp"
#include "ringing/mbsolver.hpp"
#include "ringing/spectrum.hpp"
#include "ringing/warnings.hpp"

using namespace ringing;

namespace {

const TimeGrid kGrid{0.0, 0.05, 1024};

ComplexEnvelope pulse(double area, double fwhm = 10.0, double delay = 0.0,
                      double detuning = 0.0) {
  PulseSpec p;
  p.area = area;
  p.spectral_fwhm = fwhm;
  p.center_time = 5.0;
  p.delay = delay;
  p.detuning = detuning;
  return gaussian_pulse(p, kGrid);
}

SolverConfig short_run() {
  SolverConfig c;
  c.z_max = 0.5;
  c.n_z = 50;
  return c;
}

}  // namespace

TEST_CASE("bloch derivatives as printed") {
  MediumParams m;
  m.gamma1 = 0.1;
  m.gamma2 = 0.2;
  BlochPoint s;
  s.p0 = {0.3, 0.1};
  s.p1 = {0.05, -0.02};
  s.pm1_conj = {0.01, 0.04};
  s.d0 = 0.8;
  s.d1 = {0.02, 0.03};
  const cplx w0{0.7, 0.2}, w1{0.1, -0.3};
  const auto d = bloch_derivatives(w0, w1, s, m);
  CHECK(std::abs(d.p0 - (w0 * s.d0 - 0.2 * s.p0)) < 1e-15);
  CHECK(d.d0 == doctest::Approx(-std::real(w0 * std::conj(s.p0)) - 0.1 * (s.d0 - 1.0)));
  CHECK(std::abs(d.p1 - (w1 * s.d0 + w0 * s.d1 - 0.2 * s.p1)) < 1e-15);
  const cplx d1 = -0.5 * (w1 * std::conj(s.p0) + std::conj(w0) * s.p1 + w0 * s.pm1_conj) - 0.1 * s.d1;
  CHECK(std::abs(d.d1 - d1) < 1e-15);
  CHECK(std::abs(d.pm1_conj - (std::conj(w0) * s.d1 - 0.2 * s.pm1_conj)) < 1e-15);
}

TEST_CASE("config validation") {
  SolverConfig c;
  CHECK_NOTHROW(c.validate());
  CHECK(c.field_corrector == FieldCorrector::rk4);
  c.n_z = 0;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  c = SolverConfig{};
  c.record_z = {2.0};
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
}

TEST_CASE("weak pump reproduces linear propagation") {
  const auto in = pulse(1e-4 * kPi);
  MediumParams m;
  const auto tr = simulate_single_beam(in, m, short_run());
  const auto lin = propagate_convolution(in, 0.5, m);
  CHECK(relative_l2(tr.pump_fields.back(), lin) < 1e-4);
  CHECK(tr.z_samples.front() == 0.0);
  CHECK(tr.z_samples.back() == doctest::Approx(0.5));
}

TEST_CASE("field correctors converge at their orders") {
  const auto in = pulse(1e-4 * kPi, 4.0);
  MediumParams m;
  const auto exact = propagate_convolution(in, 0.5, m);
  auto error = [&](FieldCorrector fc, std::size_t nz) {
    SolverConfig c = short_run();
    c.field_corrector = fc;
    c.n_z = nz;
    return relative_l2(simulate_single_beam(in, m, c).pump_fields.back(), exact);
  };
  const double euler_ratio = error(FieldCorrector::euler, 10) / error(FieldCorrector::euler, 20);
  const double heun_ratio = error(FieldCorrector::heun, 10) / error(FieldCorrector::heun, 20);
  CHECK(euler_ratio > 1.7);
  CHECK(heun_ratio > 3.4);
  CHECK(error(FieldCorrector::rk4, 10) < error(FieldCorrector::heun, 10));
}

TEST_CASE("bloch vector is conserved without damping") {
  MediumParams m;
  m.gamma1 = 0.0;
  m.gamma2 = 0.0;
  const auto tr = simulate_single_beam(pulse(0.49 * kPi), m, short_run());
  CHECK(tr.bloch_norm_drift < 1e-6);
}

TEST_CASE("recording snapshots and states") {
  SolverConfig c = short_run();
  c.record_z = {0.1, 0.25};
  c.record_states = true;
  const auto tr = simulate_single_beam(pulse(0.1), MediumParams{}, c);
  REQUIRE(tr.z_samples.size() == 3);
  CHECK(tr.z_samples[1] == doctest::Approx(0.1));
  CHECK(tr.index_of(0.24) == 2);
  REQUIRE(tr.states.size() == 3);
  // Ahead of the pulse the input plane is still at equilibrium.
  for (std::size_t j = 0; j < 20; ++j) CHECK(tr.states[0].d0[j] == doctest::Approx(1.0));
  CHECK(tr.states[0].d0.back() < 1.0);
}

TEST_CASE("pump area guard warns") {
  WarningCapture cap;
  SolverConfig c = short_run();
  c.n_z = 5;
  simulate_single_beam(pulse(0.6 * kPi), MediumParams{}, c);
  CHECK(cap.contains("area"));
}

TEST_CASE("pump off: probe follows linear propagation") {
  MediumParams m;
  const auto pump = pulse(0.0);
  const auto probe = pulse(1.0, 10.0, 0.5);
  const auto tr = simulate_pump_probe(pump, probe, BeamGeometry{}, m, short_run());
  const auto lin = propagate_convolution(probe, 0.5, m);
  CHECK(relative_l2(tr.probe_fields.back(), lin) < 1e-3);
}

TEST_CASE("probe linearity and one-way coupling") {
  MediumParams m;
  const auto pump = pulse(0.49 * kPi);
  const auto pa = pulse(1.0, 10.0, -0.5);
  const auto pb = pulse(0.7, 4.0, 0.5, 1.0);
  const auto cfg = short_run();
  const auto ta = simulate_pump_probe(pump, pa, BeamGeometry{}, m, cfg);
  const auto tb = simulate_pump_probe(pump, pb, BeamGeometry{}, m, cfg);
  auto sum_in = pa;
  for (std::size_t j = 0; j < sum_in.size(); ++j) sum_in.samples[j] += pb.samples[j];
  const auto tab = simulate_pump_probe(pump, sum_in, BeamGeometry{}, m, cfg);
  auto sum_out = ta.probe_fields.back();
  for (std::size_t j = 0; j < sum_out.size(); ++j) sum_out.samples[j] += tb.probe_fields.back().samples[j];
  CHECK(relative_l2(tab.probe_fields.back(), sum_out) < 1e-12);

  auto scaled = pa;
  const cplx c{-0.4, 1.3};
  for (auto& v : scaled.samples) v *= c;
  const auto ts = simulate_pump_probe(pump, scaled, BeamGeometry{}, m, cfg);
  auto expect = ta.probe_fields.back();
  for (auto& v : expect.samples) v *= c;
  CHECK(relative_l2(ts.probe_fields.back(), expect) < 1e-12);

  const auto single = simulate_single_beam(pump, m, cfg);
  CHECK(single.pump_fields.back().samples == ta.pump_fields.back().samples);
  CHECK(ts.pump_fields.back().samples == ta.pump_fields.back().samples);
}

TEST_CASE("probe drift term is a small correction") {
  MediumParams m;
  const auto pump = pulse(0.49 * kPi);
  const auto probe = pulse(1.0, 10.0, -0.5);
  SolverConfig cfg = short_run();
  const auto a = simulate_pump_probe(pump, probe, BeamGeometry{}, m, cfg);
  cfg.include_probe_drift = true;
  const auto b = simulate_pump_probe(pump, probe, BeamGeometry{}, m, cfg);
  const double d = relative_l2(b.probe_fields.back(), a.probe_fields.back());
  CHECK(d > 0.0);
  CHECK(d < 1e-2);
}

TEST_CASE("causality of solver output") {
  TimeGrid g{-3.0, 0.05, 1024};
  PulseSpec p;
  const auto in = gaussian_pulse(p, g);
  const auto tr = simulate_single_beam(in, MediumParams{}, short_run());
  for (std::size_t j = 0; j < 60; ++j) CHECK(tr.pump_fields.back().samples[j] == cplx{});
}

TEST_CASE("mismatched beams are rejected") {
  const auto pump = pulse(0.1);
  const auto probe = gaussian_pulse(PulseSpec{}, TimeGrid{0.0, 0.05, 512});
  CHECK_THROWS_AS(simulate_pump_probe(pump, probe, BeamGeometry{}, MediumParams{}, short_run()),
                  std::invalid_argument);
}
