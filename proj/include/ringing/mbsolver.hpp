#pragma once

// Reduced Maxwell-Bloch marching solver in the retarded frame tau = t - z/c.
//
// The pump harmonic (Omega0, p0, D0) evolves nonlinearly; the probe harmonic
// (Omega1, p1, p_{-1}^*, D1) is carried to first order in its amplitude. At
// every propagation step the Bloch variables are integrated over the whole
// tau grid (RK4, field midpoints from cubic interpolation in tau) and the
// fields are then advanced in z with an Euler, Heun or classical RK4 step.

#include <optional>
#include <vector>

#include "ringing/core.hpp"

namespace ringing {

// Bloch variables at one (tau, z) point.
struct BlochPoint {
  cplx p0;
  cplx p1;
  cplx pm1_conj;  // p_{-1}^*
  double d0 = 0.0;
  cplx d1;

  static BlochPoint equilibrium(const MediumParams& medium) {
    BlochPoint s;
    s.d0 = medium.d_eq;
    return s;
  }
};

BlochPoint bloch_derivatives(cplx omega0, cplx omega1, const BlochPoint& state,
                             const MediumParams& medium);

// Medium variables along tau at a fixed z.
struct MediumState {
  std::vector<cplx> p0;
  std::vector<cplx> p1;
  std::vector<cplx> pm1_conj;
  std::vector<double> d0;
  std::vector<cplx> d1;

  std::size_t size() const { return p0.size(); }
};

enum class BlochIntegrator { rk4 };
enum class FieldCorrector { euler, heun, rk4 };

struct SolverConfig {
  double z_max = 1.0;
  std::size_t n_z = 100;
  BlochIntegrator bloch_integrator = BlochIntegrator::rk4;
  FieldCorrector field_corrector = FieldCorrector::rk4;
  bool include_probe_drift = false;
  double pump_area_guard = kPi / 2.0;
  // Propagation distances to record besides the input plane; each is snapped
  // to the nearest step. Empty means {z_max}.
  std::vector<double> record_z;
  bool record_states = false;

  void validate() const;
  double dz() const { return z_max / static_cast<double>(n_z); }
};

struct Trajectory {
  std::vector<double> z_samples;  // starts at 0 (input plane)
  std::vector<ComplexEnvelope> pump_fields;
  std::vector<ComplexEnvelope> probe_fields;  // empty for single-beam runs
  std::vector<MediumState> states;            // filled when record_states
  // max over all integrated (tau, z) points of | |p0|^2 + D0^2 - D_eq^2 |.
  double bloch_norm_drift = 0.0;

  // Index of the recorded sample closest to z.
  std::size_t index_of(double z) const;
};

Trajectory simulate_single_beam(const ComplexEnvelope& pulse_in, const MediumParams& medium,
                                const SolverConfig& config);

Trajectory simulate_pump_probe(const ComplexEnvelope& pump_in, const ComplexEnvelope& probe_in,
                               const BeamGeometry& geometry, const MediumParams& medium,
                               const SolverConfig& config);

}  // namespace ringing
