#include "ringing/mbsolver.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "ringing/warnings.hpp"

namespace ringing {

namespace {

BlochPoint operator+(const BlochPoint& a, const BlochPoint& b) {
  return {a.p0 + b.p0, a.p1 + b.p1, a.pm1_conj + b.pm1_conj, a.d0 + b.d0, a.d1 + b.d1};
}

BlochPoint operator*(double h, const BlochPoint& a) {
  return {h * a.p0, h * a.p1, h * a.pm1_conj, h * a.d0, h * a.d1};
}

struct FieldPair {
  const std::vector<cplx>& pump;
  const std::vector<cplx>* probe;  // null in single-beam runs
};

// Integrates the Bloch variables along tau for fixed fields. The medium is at
// equilibrium at the first grid sample.
class BlochSweep {
 public:
  BlochSweep(const MediumParams& medium, double dt) : medium_(medium), dt_(dt) {}

  void run(const FieldPair& fields, MediumState& out, double& norm_drift) const {
    const std::size_t n = fields.pump.size();
    resize(out, n);
    BlochPoint s = BlochPoint::equilibrium(medium_);
    const double deq2 = medium_.d_eq * medium_.d_eq;
    store(out, 0, s);
    for (std::size_t j = 0; j + 1 < n; ++j) {
      const cplx a0 = fields.pump[j];
      const cplx b0 = fields.pump[j + 1];
      const cplx a1 = fields.probe ? (*fields.probe)[j] : cplx{};
      const cplx b1 = fields.probe ? (*fields.probe)[j + 1] : cplx{};
      const cplx m0 = midpoint(fields.pump, j);
      const cplx m1 = fields.probe ? midpoint(*fields.probe, j) : cplx{};

      const BlochPoint k1 = bloch_derivatives(a0, a1, s, medium_);
      const BlochPoint k2 = bloch_derivatives(m0, m1, s + (0.5 * dt_) * k1, medium_);
      const BlochPoint k3 = bloch_derivatives(m0, m1, s + (0.5 * dt_) * k2, medium_);
      const BlochPoint k4 = bloch_derivatives(b0, b1, s + dt_ * k3, medium_);
      s = s + (dt_ / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);

      store(out, j + 1, s);
      norm_drift = std::max(norm_drift, std::abs(std::norm(s.p0) + s.d0 * s.d0 - deq2));
    }
  }

 private:
  // Field at tau_j + dt/2: four-point cubic interpolation, linear at the ends.
  static cplx midpoint(const std::vector<cplx>& f, std::size_t j) {
    if (j == 0 || j + 2 >= f.size()) return 0.5 * (f[j] + f[j + 1]);
    return (9.0 * (f[j] + f[j + 1]) - (f[j - 1] + f[j + 2])) / 16.0;
  }

  static void resize(MediumState& st, std::size_t n) {
    st.p0.resize(n);
    st.p1.resize(n);
    st.pm1_conj.resize(n);
    st.d0.resize(n);
    st.d1.resize(n);
  }

  static void store(MediumState& st, std::size_t j, const BlochPoint& s) {
    st.p0[j] = s.p0;
    st.p1[j] = s.p1;
    st.pm1_conj[j] = s.pm1_conj;
    st.d0[j] = s.d0;
    st.d1[j] = s.d1;
  }

  const MediumParams& medium_;
  double dt_;
};

struct MarchSetup {
  const ComplexEnvelope& pump_in;
  const ComplexEnvelope* probe_in;
  double cos_angle = 1.0;
};

std::vector<std::size_t> record_steps(const SolverConfig& config) {
  std::vector<double> targets = config.record_z;
  if (targets.empty()) targets.push_back(config.z_max);
  std::vector<std::size_t> steps;
  const double dz = config.dz();
  for (double z : targets) {
    steps.push_back(static_cast<std::size_t>(std::llround(z / dz)));
  }
  steps.push_back(0);
  std::sort(steps.begin(), steps.end());
  steps.erase(std::unique(steps.begin(), steps.end()), steps.end());
  return steps;
}

bool all_finite(const std::vector<cplx>& v) {
  for (const auto& x : v) {
    if (!std::isfinite(x.real()) || !std::isfinite(x.imag())) return false;
  }
  return true;
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

Trajectory march(const MarchSetup& setup, const MediumParams& medium, const SolverConfig& config) {
  medium.validate(true);
  config.validate();
  const TimeGrid grid = setup.pump_in.grid;
  grid.validate();
  if (setup.pump_in.size() != grid.n) throw std::invalid_argument("solver: pump length mismatch");
  if (setup.probe_in != nullptr && !(setup.probe_in->grid == grid)) {
    throw std::invalid_argument("solver: pump and probe must share one time grid");
  }

  const double dz = config.dz();
  if (dz * medium.omega_c > 0.05) {
    warn("solver: dz * omega_c / c = " + fmt(dz * medium.omega_c) + " exceeds 0.05");
  }
  const double area = std::abs(pulse_area(setup.pump_in));
  if (area >= config.pump_area_guard) {
    warn("solver: pump area " + fmt(area) + " >= guard " + fmt(config.pump_area_guard) +
         "; the medium may be inverted");
  }

  const bool with_probe = setup.probe_in != nullptr;
  const std::size_t n = grid.n;
  const double wc2 = medium.omega_c * medium.omega_c;
  const double drift_coeff =
      (with_probe && config.include_probe_drift) ? (1.0 - setup.cos_angle) / grid.dt : 0.0;
  const double probe_scale = 1.0 / setup.cos_angle;

  ComplexEnvelope pump = setup.pump_in;
  pump.enforce_causality();
  ComplexEnvelope probe = with_probe ? *setup.probe_in : ComplexEnvelope(grid);
  probe.enforce_causality();

  const auto steps = record_steps(config);
  Trajectory traj;
  const BlochSweep sweep(medium, grid.dt);

  auto fields_of = [&](const ComplexEnvelope& p0, const ComplexEnvelope& p1) {
    return FieldPair{p0.samples, with_probe ? &p1.samples : nullptr};
  };

  // dOmega/dz for both beams given the fields and the medium response.
  auto slope = [&](const ComplexEnvelope& f1, const MediumState& st,
                   std::vector<cplx>& s0, std::vector<cplx>& s1) {
    s0.resize(n);
    s1.resize(n);
    for (std::size_t j = 0; j < n; ++j) s0[j] = -wc2 * st.p0[j];
    if (!with_probe) return;
    for (std::size_t j = 0; j < n; ++j) {
      cplx rhs = -wc2 * st.p1[j];
      if (drift_coeff != 0.0) {
        const cplx prev = j > 0 ? f1.samples[j - 1] : cplx{};
        rhs -= drift_coeff * (f1.samples[j] - prev);
      }
      s1[j] = probe_scale * rhs;
    }
  };

  auto record = [&](std::size_t step, const MediumState& st) {
    traj.z_samples.push_back(static_cast<double>(step) * dz);
    traj.pump_fields.push_back(pump);
    if (with_probe) traj.probe_fields.push_back(probe);
    if (config.record_states) traj.states.push_back(st);
  };

  // One Runge-Kutta stage: fields offset from the step start by h times the
  // previous slope, swept through the medium, returning the new slope.
  MediumState stage_state;
  ComplexEnvelope pump_stage = pump;
  ComplexEnvelope probe_stage = probe;
  auto stage = [&](double h, const std::vector<cplx>& k0, const std::vector<cplx>& k1,
                   std::vector<cplx>& out0, std::vector<cplx>& out1) {
    for (std::size_t j = 0; j < n; ++j) pump_stage.samples[j] = pump.samples[j] + h * k0[j];
    if (with_probe) {
      for (std::size_t j = 0; j < n; ++j) probe_stage.samples[j] = probe.samples[j] + h * k1[j];
    }
    sweep.run(fields_of(pump_stage, probe_stage), stage_state, traj.bloch_norm_drift);
    slope(probe_stage, stage_state, out0, out1);
  };

  MediumState state;
  std::array<std::vector<cplx>, 4> k0;
  std::array<std::vector<cplx>, 4> k1;
  std::size_t next_record = 0;

  for (std::size_t step = 0;; ++step) {
    sweep.run(fields_of(pump, probe), state, traj.bloch_norm_drift);
    if (next_record < steps.size() && steps[next_record] == step) {
      record(step, state);
      ++next_record;
    }
    if (step == config.n_z) break;

    slope(probe, state, k0[0], k1[0]);
    switch (config.field_corrector) {
      case FieldCorrector::euler:
        for (std::size_t j = 0; j < n; ++j) pump.samples[j] += dz * k0[0][j];
        if (with_probe) {
          for (std::size_t j = 0; j < n; ++j) probe.samples[j] += dz * k1[0][j];
        }
        break;
      case FieldCorrector::heun:
        stage(dz, k0[0], k1[0], k0[1], k1[1]);
        for (std::size_t j = 0; j < n; ++j) pump.samples[j] += 0.5 * dz * (k0[0][j] + k0[1][j]);
        if (with_probe) {
          for (std::size_t j = 0; j < n; ++j) {
            probe.samples[j] += 0.5 * dz * (k1[0][j] + k1[1][j]);
          }
        }
        break;
      case FieldCorrector::rk4:
        stage(0.5 * dz, k0[0], k1[0], k0[1], k1[1]);
        stage(0.5 * dz, k0[1], k1[1], k0[2], k1[2]);
        stage(dz, k0[2], k1[2], k0[3], k1[3]);
        for (std::size_t j = 0; j < n; ++j) {
          pump.samples[j] += dz / 6.0 * (k0[0][j] + 2.0 * (k0[1][j] + k0[2][j]) + k0[3][j]);
        }
        if (with_probe) {
          for (std::size_t j = 0; j < n; ++j) {
            probe.samples[j] += dz / 6.0 * (k1[0][j] + 2.0 * (k1[1][j] + k1[2][j]) + k1[3][j]);
          }
        }
        break;
    }
    pump.enforce_causality();
    if (with_probe) probe.enforce_causality();

    if (!all_finite(pump.samples) || (with_probe && !all_finite(probe.samples))) {
      throw NumericalError("solver diverged at step " + std::to_string(step + 1) + " (z = " +
                           fmt(static_cast<double>(step + 1) * dz) + ")");
    }
  }
  return traj;
}

}  // namespace

BlochPoint bloch_derivatives(cplx omega0, cplx omega1, const BlochPoint& s,
                             const MediumParams& medium) {
  const double g1 = medium.gamma1;
  const double g2 = medium.gamma2;
  BlochPoint d;
  d.p0 = omega0 * s.d0 - g2 * s.p0;
  // -(1/2)(Omega0 p0^* + Omega0^* p0) = -Re(Omega0 p0^*)
  d.d0 = -(omega0 * std::conj(s.p0)).real() - g1 * (s.d0 - medium.d_eq);
  d.p1 = omega1 * s.d0 + omega0 * s.d1 - g2 * s.p1;
  d.d1 = -0.5 * (omega1 * std::conj(s.p0) + std::conj(omega0) * s.p1 + omega0 * s.pm1_conj) -
         g1 * s.d1;
  d.pm1_conj = std::conj(omega0) * s.d1 - g2 * s.pm1_conj;
  return d;
}

void SolverConfig::validate() const {
  if (!(z_max > 0.0) || !std::isfinite(z_max)) {
    throw std::invalid_argument("solver: z_max must be positive");
  }
  if (n_z < 1) throw std::invalid_argument("solver: n_z must be at least 1");
  if (!(pump_area_guard > 0.0)) throw std::invalid_argument("solver: pump_area_guard must be positive");
  for (double z : record_z) {
    if (!(z >= 0.0) || z > z_max * (1.0 + 1e-12)) {
      throw std::invalid_argument("solver: record_z entry outside [0, z_max]");
    }
  }
}

std::size_t Trajectory::index_of(double z) const {
  if (z_samples.empty()) throw std::out_of_range("trajectory: no samples recorded");
  std::size_t best = 0;
  for (std::size_t i = 1; i < z_samples.size(); ++i) {
    if (std::abs(z_samples[i] - z) < std::abs(z_samples[best] - z)) best = i;
  }
  return best;
}

Trajectory simulate_single_beam(const ComplexEnvelope& pulse_in, const MediumParams& medium,
                                const SolverConfig& config) {
  return march(MarchSetup{pulse_in, nullptr, 1.0}, medium, config);
}

Trajectory simulate_pump_probe(const ComplexEnvelope& pump_in, const ComplexEnvelope& probe_in,
                               const BeamGeometry& geometry, const MediumParams& medium,
                               const SolverConfig& config) {
  geometry.validate();
  return march(MarchSetup{pump_in, &probe_in, std::cos(geometry.angle)}, medium, config);
}

}  // namespace ringing
