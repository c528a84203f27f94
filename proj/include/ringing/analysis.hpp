#pragma once

// Observables derived from propagated envelopes: transmission ratios,
// near-resonant feature classification, ringing node times and a simple
// spectral extremum counter.

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "ringing/core.hpp"
#include "ringing/spectrum.hpp"

namespace ringing {

struct TransmissionCurve {
  double omega_start = 0.0;
  double domega = 1.0;
  std::size_t n = 0;
  std::vector<double> ratio;
  std::vector<bool> masked;  // input below the regularization floor

  double omega(std::size_t i) const { return omega_start + static_cast<double>(i) * domega; }
  bool same_grid(const TransmissionCurve& other) const;
};

// |F_out| / |F_in| on bins where |F_in| >= floor * max |F_in|; other bins are
// masked with ratio 0. Throws std::invalid_argument on a grid mismatch.
TransmissionCurve transmission(const Spectrum& out_spec, const Spectrum& in_spec,
                               double floor = 1e-3);

enum class FeatureKind { doublet, dip, flat };

std::string to_string(FeatureKind kind);

struct FeatureReport {
  FeatureKind kind = FeatureKind::flat;
  std::pair<double, double> peak_offsets{0.0, 0.0};  // (negative side, positive side)
  double width = 0.0;
  double contrast = 0.0;  // max |curve - baseline| in the window
};

struct FeatureOptions {
  double window = 5.0;        // search |omega| <= window
  double core = 3e-3;         // excluded absorption core |omega| <= core
  double flat_tolerance = 1e-3;  // contrast below this is reported flat
};

// Compares a transmission curve with the pump-off baseline near resonance.
// The deviation d = curve - baseline decides the class: a dominant negative
// excursion is a dip, with width between the outermost half-depth crossings;
// positive excursions on both sides of resonance form a doublet, with width
// equal to the peak separation. A doublet peak is the outermost local maximum
// whose excess reaches half the largest excess on its side. Throws
// std::invalid_argument when the window holds no usable bin or the grids
// differ.
FeatureReport feature_report(const TransmissionCurve& curve, const TransmissionCurve& baseline,
                             const FeatureOptions& options = {});

// Times of the local minima of |Omega| after t_min that fall below
// fraction * (mean of the two neighbouring maxima), refined by a parabola
// through |Omega|^2.
std::vector<double> find_ringing_nodes(const ComplexEnvelope& env, double t_min,
                                       double fraction = 0.1);

// Peak-to-peak amplitude of |Omega| (its maximum) over t >= t_min.
double tail_peak(const ComplexEnvelope& env, double t_min);

// Number of local extrema of |F(omega)| on |omega| <= window, where a turning
// point counts only once the signal retreats from it by more than
// rel_prominence * max |F| in the window.
std::size_t count_spectral_extrema(const Spectrum& spec, double window,
                                   double rel_prominence = 1e-3);

}  // namespace ringing
