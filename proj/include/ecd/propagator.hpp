#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "ecd/control_hamiltonian.hpp"
#include "ecd/spectral.hpp"

namespace ecd {

/// H(t) = control terms (coefficients as functions of time) + extra matrix-valued terms.
class TimeDependentHamiltonian {
 public:
  using Term = std::function<Matrix(double)>;

  explicit TimeDependentHamiltonian(ControlHamiltonian base);

  TimeDependentHamiltonian& add_term(Term term);
  /// Highest carrier angular frequency present (0 = no oscillating pulse).
  TimeDependentHamiltonian& set_carrier(double omega);
  /// Phase origin of the carrier; stroboscopic samples sit at origin + n*2pi/omega.
  TimeDependentHamiltonian& set_carrier_origin(double t_ref);
  /// Block labels for block-wise exponentiation (same contract as spectral sectors).
  TimeDependentHamiltonian& set_blocks(SectorLabels labels);

  int dim() const { return base_.dim(); }
  double carrier() const { return carrier_; }
  std::optional<double> carrier_origin() const { return carrier_origin_; }
  const ControlHamiltonian& base() const { return base_; }
  const std::vector<std::vector<Eigen::Index>>& blocks() const { return blocks_; }
  const SectorLabels& block_labels() const { return block_labels_; }

  Matrix at(double t) const;

 private:
  ControlHamiltonian base_;
  std::vector<Term> extra_;
  double carrier_ = 0.0;
  std::optional<double> carrier_origin_;
  SectorLabels block_labels_;
  std::vector<std::vector<Eigen::Index>> blocks_;
};

struct StepPolicy {
  /// Steps per carrier period when a carrier is present.
  int substeps_per_period = 20;
  /// dt <= tau / min_steps.
  int min_steps = 100;
  /// Optional absolute bound on dt.
  std::optional<double> max_dt;
  /// Double the step density until the end state changes by less than converge_tol.
  bool self_converge = false;
  double converge_tol = 1e-9;
  int max_doublings = 6;
};

struct StoreOptions {
  /// Store at every carrier period boundary.
  bool stroboscopic = true;
  /// Also store every n steps (0 = off).
  std::size_t every_n_steps = 0;
};

struct PropagationResult {
  std::vector<double> times;
  /// Filled by propagate_state.
  std::vector<Vector> states;
  /// Filled by propagate.
  std::vector<Matrix> unitaries;
  /// Largest step used.
  double step_size = 0.0;
  std::size_t steps = 0;
  std::string model_id;
  std::string pulse_id;

  const Vector& final_state() const { return states.back(); }
  const Matrix& final_unitary() const { return unitaries.back(); }
};

/// Time-ordered propagator of midpoint exponentials exp(-i H(t_k + dt/2) dt).
PropagationResult propagate(const TimeDependentHamiltonian& h, double t0, double tau, const StepPolicy& policy = {},
                            const StoreOptions& store = {});

PropagationResult propagate_state(const TimeDependentHamiltonian& h, const Vector& psi0, double t0, double tau,
                                  const StepPolicy& policy = {}, const StoreOptions& store = {});

/// Step boundaries resolved from the policy (exposed for tests and the CLI).
struct StepGrid {
  std::vector<double> boundaries;
  /// Indices into boundaries that are stroboscopic (carrier period) points.
  std::vector<std::size_t> stroboscopic;
};
StepGrid resolve_steps(const TimeDependentHamiltonian& h, double t0, double tau, const StepPolicy& policy);

/// exp(-i s H) computed block by block when block labels are declared.
Matrix block_expm_i(const Matrix& h, double s, const std::vector<std::vector<Eigen::Index>>& blocks);

struct AdiabaticOptions {
  std::size_t steps = 20000;
  /// Drop the off-diagonal couplings (dynamics with the exact CD field added).
  bool with_cd = false;
  /// Store every n steps; the end point is always stored.
  std::size_t store_every = 100;
};

struct AdiabaticTrajectory {
  std::vector<double> times;
  /// Coefficients in the frame's eigenbasis at lambda(t).
  std::vector<Vector> coefficients;
  Eigen::VectorXd populations(std::size_t k) const { return coefficients[k].cwiseAbs2(); }
};

/// Integrates da_n/dt = -i E_n a_n - lambda_dot sum_m <n|d_lambda m> a_m in the instantaneous eigenbasis.
/// The step basis is parallel transported, which removes the diagonal connection; coefficients are
/// reported in the frame gauge, so the geometric phase is contained in the output.
AdiabaticTrajectory adiabatic_frame_propagate(const SpectralFrame& frame, const ControlHamiltonian& h,
                                              const Schedule& lambda_of_t, const Vector& a0, double t0, double t1,
                                              const AdiabaticOptions& options = {});

/// H_F = (i/T) log U via Schur decomposition and principal logarithm.
Operator floquet_log(const Operator& u_period, double period);
Operator floquet_log(const Matrix& u_period, double period);

double state_fidelity(const Vector& psi, const Vector& phi);
/// |Tr(P U^dagger V P) / Tr(P)|^2
double gate_fidelity(const Matrix& u, const Matrix& v, const Matrix& projector);

}  // namespace ecd
