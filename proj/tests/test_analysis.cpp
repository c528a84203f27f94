#include <cmath>

#include "doctest.h"
#include "ringing/analysis.hpp"
#include "ringing/core.hpp"
#include "ringing/lindisp.hpp"
#include "ringing/spectrum.hpp"

using namespace ringing;

namespace {

Spectrum make_spectrum(std::vector<cplx> values, double w0 = -5.0, double dw = 0.1) {
  Spectrum s;
  s.omega_start = w0;
  s.domega = dw;
  s.n = values.size();
  s.values = std::move(values);
  return s;
}

TransmissionCurve make_curve(double (*f)(double)) {
  TransmissionCurve c;
  c.omega_start = -6.0;
  c.domega = 0.01;
  c.n = 1201;
  c.ratio.resize(c.n);
  c.masked.assign(c.n, false);
  for (std::size_t i = 0; i < c.n; ++i) c.ratio[i] = f(c.omega(i));
  return c;
}

double unity(double) { return 1.0; }
double bumps(double w) {
  return 1.0 + 0.4 * std::exp(-std::pow((w - 0.8) / 0.2, 2)) +
         0.4 * std::exp(-std::pow((w + 0.8) / 0.2, 2));
}
double hole(double w) { return 1.0 - 0.6 * std::exp(-std::pow(w / 0.5, 2)); }

}  // namespace

TEST_CASE("transmission of identical spectra is one") {
  std::vector<cplx> v(101);
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double w = -5.0 + 0.1 * i;
    v[i] = std::exp(-w * w) * cplx(1.0, 0.5);
  }
  const auto in = make_spectrum(v);
  const auto t = transmission(in, in);
  for (std::size_t i = 0; i < t.n; ++i) {
    if (t.masked[i]) {
      CHECK(std::abs(in.values[i]) < 1e-3 * std::abs(in.values[50]));
      CHECK(t.ratio[i] == 0.0);
    } else {
      CHECK(t.ratio[i] == doctest::Approx(1.0));
    }
  }
  CHECK(t.masked.front());
  CHECK_FALSE(t.masked[50]);
}

TEST_CASE("transmission is invariant under joint complex scaling") {
  std::vector<cplx> a(64), b(64);
  for (std::size_t i = 0; i < 64; ++i) {
    a[i] = cplx(1.0 + 0.1 * i, 0.3);
    b[i] = cplx(0.5, -0.02 * i);
  }
  const auto t1 = transmission(make_spectrum(b), make_spectrum(a));
  const cplx c{2.0, -3.0};
  for (auto& x : a) x *= c;
  for (auto& x : b) x *= c;
  const auto t2 = transmission(make_spectrum(b), make_spectrum(a));
  for (std::size_t i = 0; i < 64; ++i) CHECK(t2.ratio[i] == doctest::Approx(t1.ratio[i]));
}

TEST_CASE("transmission rejects mismatched grids") {
  const auto a = make_spectrum(std::vector<cplx>(10, 1.0));
  const auto b = make_spectrum(std::vector<cplx>(10, 1.0), -5.0, 0.2);
  CHECK_THROWS_AS(transmission(a, b), std::invalid_argument);
  CHECK_THROWS_AS(transmission(a, a, 0.0), std::invalid_argument);
}

TEST_CASE("feature classification") {
  const auto base = make_curve(unity);
  const auto flat = feature_report(base, base);
  CHECK(flat.kind == FeatureKind::flat);
  CHECK(flat.contrast == 0.0);

  const auto d = feature_report(make_curve(bumps), base);
  CHECK(d.kind == FeatureKind::doublet);
  CHECK(d.peak_offsets.first == doctest::Approx(-0.8).epsilon(0.02));
  CHECK(d.peak_offsets.second == doctest::Approx(0.8).epsilon(0.02));
  CHECK(d.width == doctest::Approx(1.6).epsilon(0.02));
  CHECK(d.contrast == doctest::Approx(0.4).epsilon(0.01));

  const auto h = feature_report(make_curve(hole), base);
  CHECK(h.kind == FeatureKind::dip);
  // Half depth of exp(-(w/0.5)^2) at w = 0.5 sqrt(ln 2).
  CHECK(h.width == doctest::Approx(2 * 0.5 * std::sqrt(std::log(2.0))).epsilon(0.02));
  CHECK(h.contrast == doctest::Approx(0.6).epsilon(0.01));
  CHECK(to_string(h.kind) == "dip");
}

TEST_CASE("feature classification is scale invariant") {
  auto c = make_curve(bumps);
  auto b = make_curve(unity);
  for (auto& r : c.ratio) r *= 3.0;
  for (auto& r : b.ratio) r *= 3.0;
  CHECK(feature_report(c, b).kind == FeatureKind::doublet);
  auto h = make_curve(hole);
  for (auto& r : h.ratio) r *= 0.2;
  for (auto& r : b.ratio) r *= 0.2 / 3.0;
  CHECK(feature_report(h, b).kind == FeatureKind::dip);
}

TEST_CASE("feature report ignores the core and masked bins") {
  auto c = make_curve(unity);
  const auto b = make_curve(unity);
  // A spike inside the core does not count.
  c.ratio[600] = 5.0;
  FeatureOptions opt;
  opt.core = 0.05;
  CHECK(feature_report(c, b, opt).kind == FeatureKind::flat);
  c.masked.assign(c.n, true);
  CHECK_THROWS_AS(feature_report(c, b, opt), std::invalid_argument);
}

TEST_CASE("ringing nodes of the pure kernel") {
  MediumParams m;
  m.gamma2 = 0.0;
  TimeGrid g{0.0, 0.05, 1200};
  ComplexEnvelope env(g);
  for (std::size_t j = 0; j < g.n; ++j) env.samples[j] = -ringing_kernel(g.time(j), 1.0, m);
  const auto nodes = find_ringing_nodes(env, 0.5);
  REQUIRE(nodes.size() >= 3);
  const double zeros[] = {3.8317059702, 7.0155866698, 10.1734681351};
  for (int k = 0; k < 3; ++k) {
    CHECK(std::abs(nodes[k] - std::pow(zeros[k] / 2.0, 2)) < g.dt);
  }
  for (std::size_t k = 2; k < nodes.size(); ++k) {
    CHECK(nodes[k] - nodes[k - 1] > nodes[k - 1] - nodes[k - 2]);
  }
  CHECK(tail_peak(env, 5.0) > 0.0);
}

TEST_CASE("no oscillation gives no nodes") {
  TimeGrid g{0.0, 0.05, 400};
  ComplexEnvelope env(g);
  for (std::size_t j = 0; j < g.n; ++j) env.samples[j] = std::exp(-0.01 * g.time(j));
  CHECK(find_ringing_nodes(env, 1.0).empty());
}

TEST_CASE("spectral extrema counting") {
  std::vector<cplx> v(1001);
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double w = -10.0 + 0.02 * i;
    v[i] = 2.0 + std::cos(3.0 * w);
  }
  const auto s = make_spectrum(v, -10.0, 0.02);
  // cos(3w) on [-5, 5]: extrema at w = k pi / 3, |k| <= 4, endpoints excluded.
  CHECK(count_spectral_extrema(s, 5.0) == 9);
  std::vector<cplx> flat(1001, 1.0);
  for (std::size_t i = 0; i < flat.size(); ++i) flat[i] += 1e-6 * std::cos(40.0 * i);
  CHECK(count_spectral_extrema(make_spectrum(flat, -10.0, 0.02), 5.0) == 0);
}
