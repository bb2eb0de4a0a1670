#include <cmath>

#include "ecd/errors.hpp"
#include "ecd/models.hpp"

namespace ecd {

namespace {

struct Shapes {
  Schedule pump;
  Schedule stokes;
};

Shapes segment_shapes(double eta, const FStirapPulseParams& p, bool second) {
  if (!(p.width > 0.0) || !(p.omega0 > 0.0)) throw DomainError("fstirap: width and Omega_0 must be positive");
  const double ts = p.separation * p.width;
  const double early = -ts;
  const double late = ts;
  const double s = std::sin(eta);
  const double c = std::cos(eta);
  if (!second) {
    return {gaussian_pulse(p.omega0 * s, late, p.width),
            gaussian_pulse(p.omega0, early, p.width) + gaussian_pulse(p.omega0 * c, late, p.width)};
  }
  // Mirror image: the pump comes first and carries a sign flip (pump phase + pi).
  return {gaussian_pulse(-p.omega0 * s, early, p.width),
          gaussian_pulse(p.omega0, late, p.width) + gaussian_pulse(p.omega0 * c, early, p.width)};
}

// cos(chi) X01 - sin(chi) Y01: (0,1) element e^{i chi}.
Operator pump_operator(double chi) {
  return Operator::hermitian(std::cos(chi) * three_level::x01().matrix() - std::sin(chi) * three_level::y01().matrix());
}

}  // namespace

Matrix fstirap_target(double eta, double chi) {
  const double c = std::cos(2.0 * eta);
  const double s = std::sin(2.0 * eta);
  const cplx e = std::polar(1.0, chi);
  Matrix u(2, 2);
  u << c, e * s, -std::conj(e) * s, c;
  return u;
}

FStirapSegment fstirap_segment(double eta, double chi, double detuning, const FStirapPulseParams& params, bool second,
                               double carrier) {
  if (detuning == 0.0) throw DomainError("fstirap: detuning Delta_1 must be nonzero");
  const Shapes shapes = segment_shapes(eta, params, second);
  const double t0 = -params.half_window * params.width;
  const double t1 = params.half_window * params.width;

  ControlHamiltonian h(3);
  Schedule pump = shapes.pump;
  Schedule stokes = shapes.stokes;
  if (carrier > 0.0) {
    const Schedule cd = stirap_cd_rabi(shapes.pump, shapes.stokes);
    const Schedule magnitude(
        [cd](double t) {
          const double v = cd(t);
          return v < 0.0 && v > -1e-12 ? 0.0 : v;
        },
        [cd](double t) { return cd.derivative(t); });
    const FmodPulses mod = synthesize_fmod_stirap(shapes.pump, shapes.stokes, magnitude, carrier, 0.0, t0);
    pump = mod.pump;
    stokes = mod.stokes;
  }
  h.add(pump.scaled(0.5), pump_operator(chi), "pump/2");
  h.add(stokes.scaled(0.5), three_level::x12(), "stokes/2");
  h.add(detuning, three_level::p1(), "Delta_1");
  return {h, t0, t1, shapes.pump, shapes.stokes, chi, detuning, carrier};
}

double fstirap_bright_phase(double eta, double detuning, const FStirapPulseParams& params) {
  if (detuning == 0.0) throw DomainError("fstirap: detuning Delta_1 must be nonzero");
  const Shapes shapes = segment_shapes(eta, params, false);
  const double t0 = -params.half_window * params.width;
  const double t1 = params.half_window * params.width;
  const double sgn = detuning > 0.0 ? 1.0 : -1.0;
  auto bright_energy = [&](double t) {
    const double p = shapes.pump(t);
    const double s = shapes.stokes(t);
    return 0.5 * (detuning - sgn * std::sqrt(detuning * detuning + p * p + s * s));
  };
  // Composite Simpson.
  constexpr int n = 200000;
  const double h = (t1 - t0) / n;
  double acc = bright_energy(t0) + bright_energy(t1);
  for (int k = 1; k < n; ++k) acc += (k % 2 ? 4.0 : 2.0) * bright_energy(t0 + k * h);
  return -acc * h / 3.0;
}

FStirapGate fstirap_gate(double eta, double chi, double detuning, const FStirapPulseParams& params, double carrier) {
  if (detuning == 0.0) throw DomainError("fstirap_gate: detuning Delta_1 must be nonzero");
  FStirapGate gate;
  gate.target = fstirap_target(eta, chi);
  gate.target_embedded = Matrix::Zero(3, 3);
  gate.target_embedded(0, 0) = gate.target(0, 0);
  gate.target_embedded(0, 2) = gate.target(0, 1);
  gate.target_embedded(2, 0) = gate.target(1, 0);
  gate.target_embedded(2, 2) = gate.target(1, 1);
  gate.target_embedded(1, 1) = 1.0;
  gate.projector = Matrix::Zero(3, 3);
  gate.projector(0, 0) = gate.projector(2, 2) = 1.0;

  gate.bright_phase = fstirap_bright_phase(eta, detuning, params);
  gate.applied_phase = chi - gate.bright_phase;
  gate.segments.push_back(fstirap_segment(eta, gate.applied_phase, detuning, params, false, carrier));
  gate.segments.push_back(fstirap_segment(eta, gate.applied_phase, -detuning, params, true, carrier));
  return gate;
}

Matrix execute_fstirap_segment(const FStirapSegment& segment, const FStirapPulseParams& params) {
  TimeDependentHamiltonian td(segment.h);
  if (segment.carrier > 0.0) td.set_carrier(segment.carrier).set_carrier_origin(segment.t_start);
  StepPolicy policy;
  policy.max_dt = params.max_dt;
  return propagate(td, segment.t_start, segment.t_end - segment.t_start, policy, StoreOptions{false, 0})
      .final_unitary();
}

Matrix execute_fstirap_gate(const FStirapGate& gate, const FStirapPulseParams& params) {
  Matrix u = Matrix::Identity(3, 3);
  for (const auto& seg : gate.segments) u = execute_fstirap_segment(seg, params) * u;
  return u;
}

}  // namespace ecd
