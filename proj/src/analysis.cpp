#include "ringing/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace ringing {

namespace {

// Vertex offset (in samples) of the parabola through three equally spaced values.
double parabola_offset(double ym, double y0, double yp) {
  const double denom = ym - 2.0 * y0 + yp;
  if (denom == 0.0) return 0.0;
  return std::clamp(0.5 * (ym - yp) / denom, -0.5, 0.5);
}

}  // namespace

bool TransmissionCurve::same_grid(const TransmissionCurve& other) const {
  return n == other.n && omega_start == other.omega_start && domega == other.domega;
}

TransmissionCurve transmission(const Spectrum& out_spec, const Spectrum& in_spec, double floor) {
  if (!(floor > 0.0)) throw std::invalid_argument("transmission: floor must be positive");
  if (!out_spec.same_grid(in_spec)) {
    throw std::invalid_argument("transmission: input and output spectra are on different grids");
  }
  double peak = 0.0;
  for (const auto& v : in_spec.values) peak = std::max(peak, std::abs(v));

  TransmissionCurve t;
  t.omega_start = in_spec.omega_start;
  t.domega = in_spec.domega;
  t.n = in_spec.n;
  t.ratio.assign(t.n, 0.0);
  t.masked.assign(t.n, true);
  const double threshold = floor * peak;
  for (std::size_t i = 0; i < t.n; ++i) {
    const double a = std::abs(in_spec.values[i]);
    if (peak > 0.0 && a >= threshold) {
      t.ratio[i] = std::abs(out_spec.values[i]) / a;
      t.masked[i] = false;
    }
  }
  return t;
}

std::string to_string(FeatureKind kind) {
  switch (kind) {
    case FeatureKind::doublet:
      return "doublet";
    case FeatureKind::dip:
      return "dip";
    case FeatureKind::flat:
      return "flat";
  }
  return "flat";
}

FeatureReport feature_report(const TransmissionCurve& curve, const TransmissionCurve& baseline,
                             const FeatureOptions& options) {
  if (!curve.same_grid(baseline)) {
    throw std::invalid_argument("feature_report: curve and baseline are on different grids");
  }
  if (!(options.window > 0.0) || !(options.core >= 0.0) || options.core >= options.window) {
    throw std::invalid_argument("feature_report: need 0 <= core < window");
  }

  // Usable bins, split by side of resonance and ordered outward from it.
  std::vector<std::size_t> neg, pos;
  for (std::size_t i = 0; i < curve.n; ++i) {
    const double w = curve.omega(i);
    if (std::abs(w) > options.window || std::abs(w) <= options.core) continue;
    if (curve.masked[i] || baseline.masked[i]) continue;
    (w < 0.0 ? neg : pos).push_back(i);
  }
  std::reverse(neg.begin(), neg.end());
  if (neg.empty() && pos.empty()) {
    throw std::invalid_argument("feature_report: no unmasked bin inside the window");
  }

  auto dev = [&](std::size_t i) { return curve.ratio[i] - baseline.ratio[i]; };

  FeatureReport r;
  double level = 0.0;
  double dmin = 0.0;
  double dmax_neg = -std::numeric_limits<double>::infinity();
  double dmax_pos = dmax_neg;
  for (auto i : neg) dmax_neg = std::max(dmax_neg, dev(i));
  for (auto i : pos) dmax_pos = std::max(dmax_pos, dev(i));
  for (const auto* side : {&neg, &pos}) {
    for (auto i : *side) {
      r.contrast = std::max(r.contrast, std::abs(dev(i)));
      dmin = std::min(dmin, dev(i));
      level = std::max(level, baseline.ratio[i]);
    }
  }
  const double tol = options.flat_tolerance * (level > 0.0 ? level : 1.0);
  if (r.contrast <= tol) return r;
  const double dmax = std::max(dmax_neg, dmax_pos);

  if (-dmin > dmax) {
    r.kind = FeatureKind::dip;
    const double half = 0.5 * dmin;
    // Outermost half-depth crossing on one side, so ripples near the core
    // do not cut the dip short.
    auto edge = [&](const std::vector<std::size_t>& side) {
      std::size_t k = side.size();
      while (k > 0 && dev(side[k - 1]) > half) --k;
      if (k == 0) return 0.0;
      --k;
      if (k + 1 == side.size()) return curve.omega(side[k]);
      const double d0 = dev(side[k]), d1 = dev(side[k + 1]);
      const double w0 = curve.omega(side[k]), w1 = curve.omega(side[k + 1]);
      return w0 + (w1 - w0) * (half - d0) / (d1 - d0);
    };
    r.peak_offsets = {edge(neg), edge(pos)};
    r.width = r.peak_offsets.second - r.peak_offsets.first;
    return r;
  }

  if (dmax_neg > tol && dmax_pos > tol) {
    r.kind = FeatureKind::doublet;
    // Outermost local maximum of the curve whose excess reaches half of the
    // largest excess on that side; multi-lobed doublets report their outer lobe.
    auto peak = [&](const std::vector<std::size_t>& side, double side_max) {
      std::size_t k = 0;
      for (std::size_t m = 0; m < side.size(); ++m) {
        const double r0 = curve.ratio[side[m]];
        const bool inner_ok = m == 0 || curve.ratio[side[m - 1]] <= r0;
        const bool outer_ok = m + 1 == side.size() || curve.ratio[side[m + 1]] <= r0;
        if (inner_ok && outer_ok && dev(side[m]) >= 0.5 * side_max) k = m;
      }
      const std::size_t i = side[k];
      double w = curve.omega(i);
      if (i > 0 && i + 1 < curve.n && !curve.masked[i - 1] && !curve.masked[i + 1]) {
        w += curve.domega *
             parabola_offset(curve.ratio[i - 1], curve.ratio[i], curve.ratio[i + 1]);
      }
      return w;
    };
    r.peak_offsets = {peak(neg, dmax_neg), peak(pos, dmax_pos)};
    r.width = r.peak_offsets.second - r.peak_offsets.first;
    return r;
  }
  return r;
}

std::vector<double> find_ringing_nodes(const ComplexEnvelope& env, double t_min, double fraction) {
  if (!(fraction > 0.0 && fraction < 1.0)) {
    throw std::invalid_argument("find_ringing_nodes: fraction must lie in (0, 1)");
  }
  const auto& g = env.grid;
  std::vector<double> a(env.size());
  for (std::size_t j = 0; j < a.size(); ++j) a[j] = std::abs(env.samples[j]);

  std::vector<std::size_t> minima;
  for (std::size_t j = 1; j + 1 < a.size(); ++j) {
    if (g.time(j) <= t_min) continue;
    if (a[j] <= a[j - 1] && a[j] < a[j + 1]) minima.push_back(j);
  }

  std::size_t first = 0;
  while (first < a.size() && g.time(first) < t_min) ++first;

  std::vector<double> nodes;
  for (std::size_t k = 0; k < minima.size(); ++k) {
    const std::size_t j = minima[k];
    const std::size_t lo = k == 0 ? first : minima[k - 1];
    const std::size_t hi = k + 1 < minima.size() ? minima[k + 1] : a.size() - 1;
    const double left = *std::max_element(a.begin() + lo, a.begin() + j);
    const double right = *std::max_element(a.begin() + j + 1, a.begin() + hi + 1);
    if (a[j] >= fraction * 0.5 * (left + right)) continue;
    const double off = parabola_offset(a[j - 1] * a[j - 1], a[j] * a[j], a[j + 1] * a[j + 1]);
    nodes.push_back(g.time(j) + off * g.dt);
  }
  return nodes;
}

double tail_peak(const ComplexEnvelope& env, double t_min) {
  double peak = 0.0;
  for (std::size_t j = 0; j < env.size(); ++j) {
    if (env.grid.time(j) >= t_min) peak = std::max(peak, std::abs(env.samples[j]));
  }
  return peak;
}

std::size_t count_spectral_extrema(const Spectrum& spec, double window, double rel_prominence) {
  std::vector<double> v;
  for (std::size_t i = 0; i < spec.n; ++i) {
    if (std::abs(spec.omega(i)) <= window) v.push_back(std::abs(spec.values[i]));
  }
  if (v.empty()) return 0;
  const double delta = rel_prominence * *std::max_element(v.begin(), v.end());

  // 0: direction not yet known, 1: rising (looking for a maximum), -1: falling.
  int state = 0;
  double hi = v[0], lo = v[0];
  std::size_t count = 0;
  for (double x : v) {
    hi = std::max(hi, x);
    lo = std::min(lo, x);
    if (state == 0) {
      if (x > lo + delta) {
        state = 1;
        hi = x;
      } else if (x < hi - delta) {
        state = -1;
        lo = x;
      }
    } else if (state == 1 && x < hi - delta) {
      ++count;
      state = -1;
      lo = x;
    } else if (state == -1 && x > lo + delta) {
      ++count;
      state = 1;
      hi = x;
    }
  }
  return count;
}

}  // namespace ringing
