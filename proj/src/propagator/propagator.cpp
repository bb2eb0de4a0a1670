#include "ecd/propagator.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <sstream>

#include "ecd/errors.hpp"

namespace ecd {

TimeDependentHamiltonian::TimeDependentHamiltonian(ControlHamiltonian base) : base_(std::move(base)) {}

TimeDependentHamiltonian& TimeDependentHamiltonian::add_term(Term term) {
  extra_.push_back(std::move(term));
  return *this;
}

TimeDependentHamiltonian& TimeDependentHamiltonian::set_carrier(double omega) {
  if (!(omega >= 0.0) || !std::isfinite(omega)) throw DomainError("carrier frequency must be finite and >= 0");
  carrier_ = omega;
  return *this;
}

TimeDependentHamiltonian& TimeDependentHamiltonian::set_carrier_origin(double t_ref) {
  carrier_origin_ = t_ref;
  return *this;
}

TimeDependentHamiltonian& TimeDependentHamiltonian::set_blocks(SectorLabels labels) {
  if (static_cast<int>(labels.size()) != dim()) throw DimensionError("block labels must have one entry per state");
  std::map<int, std::vector<Eigen::Index>> groups;
  for (std::size_t i = 0; i < labels.size(); ++i) groups[labels[i]].push_back(static_cast<Eigen::Index>(i));
  blocks_.clear();
  for (auto& [label, idx] : groups) blocks_.push_back(std::move(idx));
  block_labels_ = std::move(labels);
  return *this;
}

Matrix TimeDependentHamiltonian::at(double t) const {
  Matrix h = base_.at(t);
  for (const auto& term : extra_) h += term(t);
  return h;
}

Matrix block_expm_i(const Matrix& h, double s, const std::vector<std::vector<Eigen::Index>>& blocks) {
  if (blocks.size() <= 1) return expm_i(h, s);
  const Eigen::Index n = h.rows();
  Matrix u = Matrix::Zero(n, n);
  for (const auto& idx : blocks) {
    const auto k = static_cast<Eigen::Index>(idx.size());
    if (k == 1) {
      u(idx[0], idx[0]) = std::polar(1.0, -s * h(idx[0], idx[0]).real());
      continue;
    }
    Matrix sub(k, k);
    for (Eigen::Index a = 0; a < k; ++a) {
      for (Eigen::Index b = 0; b < k; ++b) sub(a, b) = h(idx[a], idx[b]);
    }
    const Matrix e = expm_i(sub, s);
    for (Eigen::Index a = 0; a < k; ++a) {
      for (Eigen::Index b = 0; b < k; ++b) u(idx[a], idx[b]) = e(a, b);
    }
  }
  return u;
}

namespace {

void check_block_couplings(const Matrix& h, const SectorLabels& labels, double t) {
  const double tol = 1e-12 * h.cwiseAbs().maxCoeff();
  for (Eigen::Index i = 0; i < h.rows(); ++i) {
    for (Eigen::Index j = i + 1; j < h.cols(); ++j) {
      if (labels[i] != labels[j] && std::abs(h(i, j)) > tol) {
        std::ostringstream os;
        os << "Hamiltonian couples declared blocks at t=" << t;
        throw DomainError(os.str());
      }
    }
  }
}

void subdivide(std::vector<double>& out, double a, double b, double dt) {
  const auto n = std::max<long>(1, static_cast<long>(std::ceil((b - a) / dt - 1e-9)));
  for (long i = 1; i <= n; ++i) out.push_back(i == n ? b : a + (b - a) * static_cast<double>(i) / n);
}

PropagationResult run(const TimeDependentHamiltonian& h, const std::optional<Vector>& psi0, double t0, double tau,
                      const StepPolicy& policy, const StoreOptions& store) {
  const StepGrid grid = resolve_steps(h, t0, tau, policy);
  const auto& b = grid.boundaries;
  const int n = h.dim();

  std::vector<char> keep(b.size(), 0);
  keep.front() = keep.back() = 1;
  if (store.stroboscopic) {
    for (std::size_t k : grid.stroboscopic) keep[k] = 1;
  }
  if (store.every_n_steps > 0) {
    for (std::size_t k = 0; k < b.size(); k += store.every_n_steps) keep[k] = 1;
  }

  PropagationResult result;
  Matrix u;
  Vector psi;
  if (psi0) {
    psi = *psi0;
  } else {
    u = Matrix::Identity(n, n);
  }
  auto record = [&](std::size_t k) {
    result.times.push_back(b[k]);
    if (psi0) {
      result.states.push_back(psi);
    } else {
      result.unitaries.push_back(u);
    }
  };
  record(0);
  for (std::size_t k = 1; k < b.size(); ++k) {
    const double dt = b[k] - b[k - 1];
    const double tm = b[k - 1] + 0.5 * dt;
    const Matrix hm = h.at(tm);
    if (!hm.allFinite()) {
      std::ostringstream os;
      os << "non-finite Hamiltonian sample at t=" << tm;
      throw NumericalError(os.str(), tm);
    }
    if (!h.blocks().empty()) check_block_couplings(hm, h.block_labels(), tm);
    const Matrix step = block_expm_i(hm, dt, h.blocks());
    if (psi0) {
      psi = step * psi;
    } else {
      u = step * u;
    }
    result.step_size = std::max(result.step_size, dt);
    if (keep[k]) record(k);
  }
  result.steps = b.size() - 1;
  return result;
}

double end_change(const PropagationResult& a, const PropagationResult& b) {
  if (!a.states.empty()) {
    const cplx o = a.final_state().dot(b.final_state());
    return 1.0 - std::norm(o);
  }
  const Matrix& ua = a.final_unitary();
  const cplx tr = (ua.adjoint() * b.final_unitary()).trace() / static_cast<double>(ua.rows());
  return 1.0 - std::norm(tr);
}

PropagationResult run_policy(const TimeDependentHamiltonian& h, const std::optional<Vector>& psi0, double t0,
                             double tau, const StepPolicy& policy, const StoreOptions& store) {
  PropagationResult r = run(h, psi0, t0, tau, policy, store);
  if (!policy.self_converge) return r;
  StepPolicy p = policy;
  for (int d = 0; d < policy.max_doublings; ++d) {
    p.substeps_per_period *= 2;
    p.min_steps *= 2;
    if (p.max_dt) *p.max_dt *= 0.5;
    PropagationResult finer = run(h, psi0, t0, tau, p, store);
    const double change = end_change(r, finer);
    r = std::move(finer);
    if (change < policy.converge_tol) break;
  }
  return r;
}

}  // namespace

StepGrid resolve_steps(const TimeDependentHamiltonian& h, double t0, double tau, const StepPolicy& policy) {
  if (!(tau > 0.0) || !std::isfinite(tau) || !std::isfinite(t0)) throw DomainError("propagation needs finite tau > 0");
  if (policy.min_steps < 1) throw DomainError("min_steps must be >= 1");
  double dt_cap = tau / policy.min_steps;
  if (policy.max_dt) {
    if (!(*policy.max_dt > 0.0)) throw DomainError("max_dt must be positive");
    dt_cap = std::min(dt_cap, *policy.max_dt);
  }
  const double t1 = t0 + tau;
  StepGrid g;
  g.boundaries.push_back(t0);
  if (h.carrier() <= 0.0) {
    subdivide(g.boundaries, t0, t1, dt_cap);
    return g;
  }
  if (policy.substeps_per_period < 20) throw DomainError("substeps_per_period must be >= 20 with a carrier present");
  const int nsub = policy.substeps_per_period;
  const double period = 2.0 * std::numbers::pi / h.carrier();
  const double sub = period / nsub;
  const double origin = h.carrier_origin().value_or(t0);
  const double dt = std::min(sub, dt_cap);
  const double eps = 1e-9 * sub;

  auto is_period_point = [&](double t) {
    const double x = (t - origin) / period;
    return std::abs(x - std::round(x)) * period <= eps;
  };
  if (is_period_point(t0)) g.stroboscopic.push_back(0);

  long j = static_cast<long>(std::floor((t0 - origin) / sub));
  double prev = t0;
  for (;; ++j) {
    const double p = origin + static_cast<double>(j) * sub;
    if (p >= t1 - eps) break;
    if (p <= prev + eps) continue;
    subdivide(g.boundaries, prev, p, dt);
    if (((j % nsub) + nsub) % nsub == 0) g.stroboscopic.push_back(g.boundaries.size() - 1);
    prev = p;
  }
  subdivide(g.boundaries, prev, t1, dt);
  if (is_period_point(t1)) g.stroboscopic.push_back(g.boundaries.size() - 1);
  return g;
}

PropagationResult propagate(const TimeDependentHamiltonian& h, double t0, double tau, const StepPolicy& policy,
                            const StoreOptions& store) {
  return run_policy(h, std::nullopt, t0, tau, policy, store);
}

PropagationResult propagate_state(const TimeDependentHamiltonian& h, const Vector& psi0, double t0, double tau,
                                  const StepPolicy& policy, const StoreOptions& store) {
  if (psi0.size() != h.dim()) throw DimensionError("initial state dimension differs from Hamiltonian");
  if (std::abs(psi0.norm() - 1.0) > 1e-10) throw DomainError("initial state must be normalized");
  return run_policy(h, psi0, t0, tau, policy, store);
}

AdiabaticTrajectory adiabatic_frame_propagate(const SpectralFrame& frame, const ControlHamiltonian& h,
                                              const Schedule& lambda_of_t, const Vector& a0, double t0, double t1,
                                              const AdiabaticOptions& options) {
  const Eigen::Index n = h.dim();
  if (a0.size() != n) throw DimensionError("initial coefficient vector dimension differs from Hamiltonian");
  if (!(t1 > t0)) throw DomainError("adiabatic_frame_propagate needs t1 > t0");
  if (options.steps < 1) throw DomainError("adiabatic_frame_propagate needs at least one step");
  const SpectralOptions& sopt = frame.options();

  // Transported basis: continued step to step so <n_prev|n_next> > 0.
  double lambda_prev = lambda_of_t(t0);
  Eigensystem basis = frame.at(h, lambda_prev);
  Vector a = a0;

  AdiabaticTrajectory traj;
  traj.times.push_back(t0);
  traj.coefficients.push_back(a);

  const double dt = (t1 - t0) / static_cast<double>(options.steps);
  for (std::size_t k = 0; k < options.steps; ++k) {
    const double tm = t0 + (static_cast<double>(k) + 0.5) * dt;
    const double lm = lambda_of_t(tm);
    const double ldot = lambda_of_t.derivative(tm);
    if (!frame.covers(lm)) throw DomainError("lambda(t) leaves the spectral frame");
    basis = continue_eigensystem(h, basis, lambda_prev, lm, sopt);
    lambda_prev = lm;
    if (basis.min_gap <= basis.gap_floor) throw DegeneracyError(lm, basis.min_gap);

    Matrix g = Matrix::Zero(n, n);
    for (Eigen::Index r = 0; r < n; ++r) g(r, r) = basis.energies(r);
    if (!options.with_cd && ldot != 0.0) {
      const Matrix d = basis.vectors.adjoint() * h.derivative_at(lm) * basis.vectors;
      for (Eigen::Index r = 0; r < n; ++r) {
        for (Eigen::Index c = 0; c < n; ++c) {
          if (r == c || basis.column_sector[r] != basis.column_sector[c]) continue;
          const cplx m = d(r, c) / (basis.energies(c) - basis.energies(r));
          g(r, c) += cplx(0.0, -ldot) * m;
        }
      }
      g = 0.5 * (g + g.adjoint());
    }
    a = expm_i(g, dt) * a;

    const bool last = k + 1 == options.steps;
    if (last || (options.store_every > 0 && (k + 1) % options.store_every == 0)) {
      const double t = last ? t1 : t0 + static_cast<double>(k + 1) * dt;
      const double lt = lambda_of_t(t);
      // a holds the coefficients in the transported basis, carried on to lambda(t).
      const Eigensystem at_t = continue_eigensystem(h, basis, lm, lt, sopt);
      const Eigensystem gauge = frame.at(h, lt);
      traj.times.push_back(t);
      traj.coefficients.push_back(gauge.vectors.adjoint() * at_t.vectors * a);
    }
  }
  return traj;
}

Operator floquet_log(const Matrix& u_period, double period) {
  return floquet_log(Operator::unitary(u_period), period);
}

Operator floquet_log(const Operator& u_period, double period) {
  if (!(period > 0.0)) throw DomainError("floquet_log: period must be positive");
  if (u_period.kind() != OperatorKind::unitary) throw NotUnitaryError("floquet_log: operator must be unitary");
  Eigen::ComplexSchur<Matrix> schur(u_period.matrix());
  const Matrix& t = schur.matrixT();
  const Matrix& q = schur.matrixU();
  const Eigen::Index n = t.rows();
  Eigen::VectorXd phase(n);
  constexpr double margin = 0.1;
  for (Eigen::Index k = 0; k < n; ++k) {
    phase(k) = std::arg(t(k, k));
    if (std::abs(phase(k)) > std::numbers::pi - margin) {
      std::ostringstream os;
      os << "floquet_log: eigenphase " << phase(k) << " within " << margin << " of the branch cut; reduce T";
      throw BranchCutError(os.str());
    }
  }
  // U = exp(-i H T) has eigenvalues exp(-i E T), so E = -phase / T.
  Matrix h = q * (-phase / period).cast<cplx>().asDiagonal() * q.adjoint();
  return Operator::hermitian(0.5 * (h + h.adjoint()));
}

double state_fidelity(const Vector& psi, const Vector& phi) {
  if (psi.size() != phi.size()) throw DimensionError("state_fidelity: dimension mismatch");
  if (std::abs(psi.norm() - 1.0) > 1e-8 || std::abs(phi.norm() - 1.0) > 1e-8) {
    throw DomainError("state_fidelity: states must be normalized");
  }
  return std::norm(psi.dot(phi));
}

double gate_fidelity(const Matrix& u, const Matrix& v, const Matrix& projector) {
  if (u.rows() != v.rows() || u.rows() != projector.rows() || u.cols() != v.cols()) {
    throw DimensionError("gate_fidelity: dimension mismatch");
  }
  const Matrix& p = projector;
  if (!is_hermitian(p, 1e-10) || (p * p - p).cwiseAbs().maxCoeff() > 1e-10) {
    throw DomainError("gate_fidelity: projector must be Hermitian and idempotent");
  }
  const double rank = p.trace().real();
  if (!(rank > 0.5)) throw DomainError("gate_fidelity: projector is zero");
  const cplx tr = (p * u.adjoint() * v * p).trace();
  return std::norm(tr / rank);
}

}  // namespace ecd
