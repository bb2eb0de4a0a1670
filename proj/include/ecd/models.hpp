#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "ecd/control_hamiltonian.hpp"
#include "ecd/floquet.hpp"
#include "ecd/propagator.hpp"
#include "ecd/spectral.hpp"

namespace ecd {

// ---------------------------------------------------------------- model specs

struct ParameterSchema {
  std::string name;
  double default_value;
  std::string unit;
  std::string description;
};

struct ModelSpec {
  std::string id;
  std::map<std::string, double> parameters;
  /// Discrete choices such as the Bell ramp kind.
  std::map<std::string, std::string> options;
  int dim = 0;
};

const std::vector<std::string>& model_ids();
const std::vector<ParameterSchema>& model_schema(const std::string& id);
/// Allowed values of each discrete option of a model.
const std::map<std::string, std::vector<std::string>>& model_options(const std::string& id);
/// Hilbert-space dimension for a model spec.
int model_dim(const ModelSpec& spec);
/// Fills defaults and checks that every parameter and option is known. Throws DomainError.
ModelSpec resolve_model_spec(const ModelSpec& spec);

// ---------------------------------------------------------------- Landau-Zener

/// H(lambda) = lambda sigma_z + Omega sigma_x.
ControlHamiltonian lz_hamiltonian_lambda(double omega);
/// H(t) with lambda(t) = v t.
ControlHamiltonian lz_model(double v, double omega);

enum class LzProtocol { adiabatic, exact_cd, ecd };

struct LzSetup {
  double v = 1.0;
  double coupling = 1.0;
  double t_start = -10.0;
  double t_end = 10.0;
  /// eCD carrier angular frequency.
  double omega = 50.0;
  double phi = 0.0;
  EnvelopeMode envelope = EnvelopeMode::interpolated;
};

/// Exact CD schedule f_CD(t) of the sweep (coefficient of sigma_y).
Schedule lz_cd_schedule(const LzSetup& setup);
TimeDependentHamiltonian lz_protocol(const LzSetup& setup, LzProtocol protocol);
/// Instantaneous ground state of lambda sigma_z + Omega sigma_x with a fixed phase convention.
Vector lz_ground_state(double lambda, double omega);

// ---------------------------------------------------------------- STIRAP

enum class StirapCd { none, exact, fmod };

struct StirapParams {
  double omega_peak = 20.0;
  double delay = 1.0;
  double sigma = 1.0;
  double detuning = 0.0;
  StirapCd cd = StirapCd::none;
  /// fmod carrier in units of 1/sigma (omega * sigma).
  double carrier_sigma = 50.0;
  double phi_minus = 0.0;
};

struct StirapModel {
  ControlHamiltonian h;
  Schedule pump;
  Schedule stokes;
  /// 2 d(theta)/dt with tan(theta) = Omega_- / Omega_+.
  Schedule omega_cd;
  double t_start;
  double t_end;
  /// Carrier angular frequency (0 when no fmod sidebands).
  double carrier;
};

/// peak exp(-(t - center)^2 / sigma^2): standard deviation sigma / sqrt(2).
Schedule gaussian_pulse(double peak, double center, double sigma);

/// Normalized bright-state projector on span{|0>, |2>} (2x2, basis |0>, |2>).
ControlHamiltonian bright_projector(const Schedule& pump, const Schedule& stokes);

/// Omega_CD(t) = 2 Im <0|H_CD|2> from the generic counterdiabatic engine on the bright projector.
Schedule stirap_cd_rabi(const Schedule& pump, const Schedule& stokes);

/// Three-level operators: |0><1| + h.c., -i|0><1| + h.c., |1><2| + h.c., |1><1|, -i|0><2| + h.c.
namespace three_level {
Operator x01();
Operator y01();
Operator x12();
Operator p1();
Operator y02();
}  // namespace three_level

StirapModel stirap_model(const StirapParams& params);
TimeDependentHamiltonian stirap_protocol(const StirapModel& model);

// ---------------------------------------------------------------- circuit-QED Bell preparation

enum class RampKind { linear, local_adiabatic, boundary_cancel };

RampKind parse_ramp_kind(const std::string& name);
std::string ramp_kind_name(RampKind kind);

/// lambda(t) on [0, tau]. local_adiabatic uses the two-level gap sqrt(4 coupling^2 + lambda^2).
Schedule ramp_schedule(RampKind kind, double lambda_start, double lambda_end, double tau, double coupling = 0.0);

/// Locally adiabatic ramp for an arbitrary gap function: dlambda/dt proportional to gap(lambda)^2.
Schedule local_adiabatic_ramp(const std::function<double(double)>& gap, double lambda_start, double lambda_end,
                              double tau, int nodes = 4001);

/// g1 g2 / [2 (Omega_1 - omega_r)].
double dispersive_coupling(double g1, double g2, double detuning);

struct BellParams {
  double omega2 = 50.0;
  double omega_r = 60.0;
  double g1 = 1.0;
  double g2 = 1.0;
  int n_ph = 4;
  /// Qubit-1 frequency Omega_1(t).
  Schedule omega1 = Schedule::constant(51.0);
};

struct BellModel {
  int n_ph;
  ControlHamiltonian h;
  SectorLabels excitation;
  /// sigma_i^+ a + sigma_i^- a^dagger
  Operator p1;
  Operator p2;
  /// i (sigma_1^+ sigma_2^- - sigma_1^- sigma_2^+)
  Operator flip_flop;
  /// Total excitation number.
  Operator number;

  int index(int q1, int q2, int photons) const;
  Vector basis_state(int q1, int q2, int photons) const;
  SpectralOptions spectral_options() const;

  Operator exact_cd(double t) const;
  /// Hilbert-Schmidt projection of the exact CD on the flip-flop operator in the single-excitation sector.
  /// residual (optional) receives |P(H_CD - h F)P| / |P H_CD P|.
  double flip_flop_component(double t, double* residual = nullptr) const;
};

/// Qubit basis |0> ground, |1> excited; basis order qubit1 (x) qubit2 (x) resonator.
BellModel bell_cqed_model(const BellParams& params);

enum class BellProtocol { adiabatic, exact_cd, ecd };

struct BellSetup {
  double g = 1.0;
  /// Qubit-resonator detuning Omega_2 - omega_r.
  double detuning = -10.0;
  double omega_r = 60.0;
  /// Initial offset Omega_1(0) - Omega_2.
  double lambda0 = 1.0;
  double tau = 10.0;
  int n_ph = 4;
  RampKind ramp = RampKind::linear;
  /// eCD carrier target; rounded so tau holds an integer number of periods.
  double omega = 1000.0;
  int substeps_per_period = 20;
  /// Step bound for runs without carrier.
  double max_dt = 0.01;
};

struct BellRun {
  double infidelity;
  double eigenstate_overlap_start;
  /// Fidelity of the final state with (|01> + |10>)/sqrt(2) in the photon vacuum.
  double bell_fidelity;
  double carrier;
  Vector final_state;
};

BellModel bell_setup_model(const BellSetup& setup);
/// Carrier rounded so that tau is a whole number of periods.
double bell_aligned_carrier(double omega, double tau);
/// h(t) sampled at the carrier-period centres and interpolated.
Schedule bell_flip_flop_schedule(const BellModel& model, double tau, double carrier);
BellRun run_bell(const BellSetup& setup, BellProtocol protocol);

/// Minimum single-excitation gap between the two qubit-like levels while Omega_1 is scanned across Omega_2.
double bell_crossing_width(double g, double detuning, double omega_r, int n_ph, int scan_points = 2001);

// ---------------------------------------------------------------- fractional STIRAP gate

struct FStirapPulseParams {
  double omega0 = 200.0;
  double width = 1.0;
  /// Pulse separation in units of width.
  double separation = 1.0;
  /// Half window in units of width.
  double half_window = 6.0;
  /// Step bound used by execute_fstirap_gate.
  double max_dt = 2.5e-4;
};

struct FStirapSegment {
  ControlHamiltonian h;
  double t_start;
  double t_end;
  /// Signed real pump (the complex phase is carried by the operators).
  Schedule pump;
  Schedule stokes;
  double pump_phase;
  double detuning;
  double carrier = 0.0;
};

struct FStirapGate {
  /// Target on span{|0>, |2>}.
  Matrix target;
  /// Target embedded in the three-level space.
  Matrix target_embedded;
  /// Projector on span{|0>, |2>}.
  Matrix projector;
  std::vector<FStirapSegment> segments;
  /// Adiabatic phase -int E_b dt of the bright path of the first segment.
  double bright_phase;
  /// Pump phase actually applied (chi - bright_phase).
  double applied_phase;
};

/// [[cos 2eta, e^{i chi} sin 2eta], [-e^{-i chi} sin 2eta, cos 2eta]]
Matrix fstirap_target(double eta, double chi);

/// One fractional STIRAP. second = false: Stokes then pump, ends in cos(eta)|0> - e^{-i chi} sin(eta)|2> from |0>.
/// second = true: time-mirrored, pulse order swapped, signed pump.
/// carrier > 0 adds fmod sidebands built from the segment's own Omega_CD.
FStirapSegment fstirap_segment(double eta, double chi, double detuning, const FStirapPulseParams& params, bool second,
                               double carrier = 0.0);

double fstirap_bright_phase(double eta, double detuning, const FStirapPulseParams& params);

FStirapGate fstirap_gate(double eta, double chi, double detuning, const FStirapPulseParams& params = {},
                         double carrier = 0.0);

/// Total three-level propagator of the gate sequence.
Matrix execute_fstirap_gate(const FStirapGate& gate, const FStirapPulseParams& params = {});
Matrix execute_fstirap_segment(const FStirapSegment& segment, const FStirapPulseParams& params = {});

}  // namespace ecd
