#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "ecd/errors.hpp"
#include "ecd/log.hpp"
#include "ecd/models.hpp"

namespace ecd {

namespace {

Operator qubit_raise() {
  Matrix m = Matrix::Zero(2, 2);
  m(1, 0) = 1.0;
  return Operator::general(m);
}

Operator qubit_z() {
  Matrix m = Matrix::Zero(2, 2);
  m(0, 0) = -1.0;
  m(1, 1) = 1.0;
  return Operator::hermitian(m);
}

Operator qubit_number() {
  return outer(2, 1, 1);
}

Operator embed(const Operator& q1, const Operator& q2, const Operator& r) {
  return tensor(tensor(q1, q2), r);
}

void check_dispersive(double qubit, double omega_r, double g, const char* who) {
  if (std::abs(qubit - omega_r) < 10.0 * std::abs(g)) {
    std::ostringstream os;
    os << "bell_cqed_model: " << who << " detuning |" << qubit << " - " << omega_r << "| is below 10 g = " << 10.0 * g
       << " (outside the dispersive regime)";
    warn(os.str());
  }
}

}  // namespace

int BellModel::index(int q1, int q2, int photons) const {
  return (q1 * 2 + q2) * n_ph + photons;
}

Vector BellModel::basis_state(int q1, int q2, int photons) const {
  Vector v = Vector::Zero(4 * n_ph);
  v(index(q1, q2, photons)) = 1.0;
  return v;
}

SpectralOptions BellModel::spectral_options() const {
  SpectralOptions o;
  o.sectors = excitation;
  return o;
}

Operator BellModel::exact_cd(double t) const {
  return cd_field(h, t, 1.0, spectral_options());
}

double BellModel::flip_flop_component(double t, double* residual) const {
  const Matrix cd = exact_cd(t).matrix();
  const Eigen::Index n = cd.rows();
  Matrix p = Matrix::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    if (excitation[i] == 1) p(i, i) = 1.0;
  }
  const Matrix fs = p * flip_flop.matrix() * p;
  const Matrix cs = p * cd * p;
  const double hval = (fs.adjoint() * cs).trace().real() / (fs.adjoint() * fs).trace().real();
  if (residual) {
    const double norm = cs.norm();
    *residual = norm > 0.0 ? (cs - hval * fs).norm() / norm : 0.0;
  }
  return hval;
}

BellModel bell_cqed_model(const BellParams& params) {
  if (params.n_ph < 2) throw DomainError("bell_cqed_model: need at least 2 photon levels");
  const int nph = params.n_ph;
  const Operator i2 = Operator::identity(2);
  const Operator ir = Operator::identity(nph);
  const Operator a = build_ladder(nph);
  const Operator r = qubit_raise();

  const Operator s1p = embed(r, i2, ir);
  const Operator s2p = embed(i2, r, ir);
  const Operator am = embed(i2, i2, a);
  const Operator p1 = Operator::hermitian((s1p * am + (s1p * am).adjoint()).matrix());
  const Operator p2 = Operator::hermitian((s2p * am + (s2p * am).adjoint()).matrix());
  const Operator nr = Operator::hermitian((am.adjoint() * am).matrix());

  ControlHamiltonian h(4 * nph);
  h.add(params.omega1.scaled(0.5), embed(qubit_z(), i2, ir), "Omega_1/2 sz1");
  h.add(0.5 * params.omega2, embed(i2, qubit_z(), ir), "Omega_2/2 sz2");
  h.add(params.omega_r, nr, "omega_r n");
  h.add(params.g1, p1, "g1 P1");
  h.add(params.g2, p2, "g2 P2");

  const double t_probe0 = std::isfinite(params.omega1.t_start()) ? params.omega1.t_start() : 0.0;
  const double t_probe1 = std::isfinite(params.omega1.t_end()) ? params.omega1.t_end() : t_probe0;
  check_dispersive(params.omega1(t_probe0), params.omega_r, params.g1, "qubit-1 (start)");
  check_dispersive(params.omega1(t_probe1), params.omega_r, params.g1, "qubit-1 (end)");
  check_dispersive(params.omega2, params.omega_r, params.g2, "qubit-2");

  SectorLabels labels(static_cast<std::size_t>(4 * nph));
  for (int q1 = 0; q1 < 2; ++q1) {
    for (int q2 = 0; q2 < 2; ++q2) {
      for (int n = 0; n < nph; ++n) labels[static_cast<std::size_t>((q1 * 2 + q2) * nph + n)] = q1 + q2 + n;
    }
  }

  const Operator s1m_s2p = (s1p.adjoint() * s2p);
  const Operator s1p_s2m = (s1p * s2p.adjoint());
  const Operator ff = Operator::hermitian((cplx(0.0, 1.0) * (s1p_s2m - s1m_s2p)).matrix());
  const Operator number = Operator::hermitian(
      (embed(qubit_number(), i2, ir) + embed(i2, qubit_number(), ir) + nr).matrix());

  return BellModel{nph, h, labels, p1, p2, ff, number};
}

BellModel bell_setup_model(const BellSetup& s) {
  if (!(s.g > 0.0)) throw DomainError("bell: coupling g must be positive");
  if (!(s.tau > 0.0)) throw DomainError("bell: tau must be positive");
  const double omega2 = s.omega_r + s.detuning;
  const double gt = std::abs(dispersive_coupling(s.g, s.g, s.detuning));
  const Schedule lambda = ramp_schedule(s.ramp, s.lambda0, 0.0, s.tau, gt);
  BellParams p;
  p.omega2 = omega2;
  p.omega_r = s.omega_r;
  p.g1 = p.g2 = s.g;
  p.n_ph = s.n_ph;
  p.omega1 = (lambda + Schedule::constant(omega2)).with_domain(0.0, s.tau);
  return bell_cqed_model(p);
}

double bell_aligned_carrier(double omega, double tau) {
  if (!(omega > 0.0) || !(tau > 0.0)) throw DomainError("bell carrier: omega and tau must be positive");
  const double periods = std::max(1.0, std::round(omega * tau / (2.0 * std::numbers::pi)));
  return 2.0 * std::numbers::pi * periods / tau;
}

Schedule bell_flip_flop_schedule(const BellModel& model, double tau, double carrier) {
  const double period = 2.0 * std::numbers::pi / carrier;
  const auto count = std::max<long>(1, std::lround(tau / period));
  std::vector<double> t(static_cast<std::size_t>(count));
  std::vector<double> h(static_cast<std::size_t>(count));
  double scale = 0.0;
  for (long n = 0; n < count; ++n) {
    t[n] = (static_cast<double>(n) + 0.5) * period;
    h[n] = model.flip_flop_component(t[n]);
    scale = std::max(scale, std::abs(h[n]));
  }
  for (double& v : h) {
    if (v < 0.0 && v > -1e-12 * scale) v = 0.0;
  }
  if (count == 1) return Schedule::constant(h[0]).with_domain(0.0, tau);
  return Schedule::sampled(std::move(t), std::move(h));
}

BellRun run_bell(const BellSetup& s, BellProtocol protocol) {
  const BellModel model = bell_setup_model(s);
  const SpectralOptions sopt = model.spectral_options();

  constexpr int grid_points = 401;
  std::vector<double> grid(grid_points);
  for (int k = 0; k < grid_points; ++k) grid[k] = s.tau * k / (grid_points - 1);
  const SpectralFrame frame = eigendecompose_continuous(model.h, grid, sopt);

  const Vector start_basis = model.basis_state(0, 1, 0);
  Eigen::Index column = 0;
  const double overlap = (frame.vectors(0).adjoint() * start_basis).cwiseAbs2().maxCoeff(&column);
  const Vector psi0 = frame.vectors(0).col(column);
  const Vector target = frame.vectors(grid_points - 1).col(column);

  ControlHamiltonian h = model.h;
  double carrier = 0.0;
  StepPolicy policy;
  policy.substeps_per_period = s.substeps_per_period;
  policy.max_dt = s.max_dt;
  TimeDependentHamiltonian td(h);
  if (protocol == BellProtocol::ecd) {
    carrier = bell_aligned_carrier(s.omega, s.tau);
    const BellEcdCoupling c = synthesize_ecd_bell(bell_flip_flop_schedule(model, s.tau, carrier), carrier, 0.0);
    h.add(c.qubit1, model.p1, "eCD qubit 1");
    h.add(c.qubit2, model.p2, "eCD qubit 2");
    td = TimeDependentHamiltonian(h);
    td.set_carrier(carrier).set_carrier_origin(0.0);
  } else if (protocol == BellProtocol::exact_cd) {
    td.add_term([model](double t) { return model.exact_cd(t).matrix(); });
  }
  td.set_blocks(model.excitation);

  const PropagationResult r = propagate_state(td, psi0, 0.0, s.tau, policy, StoreOptions{false, 0});
  const Vector& psi = r.final_state();

  Vector bell = (model.basis_state(0, 1, 0) + model.basis_state(1, 0, 0)) / std::sqrt(2.0);
  return BellRun{1.0 - std::norm(target.dot(psi)), overlap, std::norm(bell.dot(psi)), carrier, psi};
}

double bell_crossing_width(double g, double detuning, double omega_r, int n_ph, int scan_points) {
  if (scan_points < 3) throw DomainError("bell_crossing_width: need at least 3 scan points");
  const double omega2 = omega_r + detuning;
  auto qubit_gap = [&](double lambda) {
    BellParams p;
    p.omega2 = omega2;
    p.omega_r = omega_r;
    p.g1 = p.g2 = g;
    p.n_ph = n_ph;
    p.omega1 = Schedule::constant(omega2 + lambda);
    const BellModel m = bell_cqed_model(p);
    std::vector<Eigen::Index> idx;
    for (Eigen::Index i = 0; i < static_cast<Eigen::Index>(m.excitation.size()); ++i) {
      if (m.excitation[i] == 1) idx.push_back(i);
    }
    const Matrix full = m.h.at(0.0);
    const auto k = static_cast<Eigen::Index>(idx.size());
    Matrix block(k, k);
    for (Eigen::Index a = 0; a < k; ++a) {
      for (Eigen::Index b = 0; b < k; ++b) block(a, b) = full(idx[a], idx[b]);
    }
    Eigen::SelfAdjointEigenSolver<Matrix> es(block);
    // Qubit-like levels carry the least photon weight.
    const Eigen::Index photon_row =
        static_cast<Eigen::Index>(std::find(idx.begin(), idx.end(), m.index(0, 0, 1)) - idx.begin());
    std::vector<std::pair<double, double>> levels;
    for (Eigen::Index c = 0; c < k; ++c) {
      levels.emplace_back(std::norm(es.eigenvectors()(photon_row, c)), es.eigenvalues()(c));
    }
    std::sort(levels.begin(), levels.end());
    return std::abs(levels[0].second - levels[1].second);
  };

  const double span = 20.0 * g * g / std::abs(detuning) + 10.0 * g * g / std::abs(detuning);
  double best_l = 0.0;
  double best = qubit_gap(0.0);
  for (int k = 0; k < scan_points; ++k) {
    const double l = -span + 2.0 * span * k / (scan_points - 1);
    const double v = qubit_gap(l);
    if (v < best) {
      best = v;
      best_l = l;
    }
  }
  // Golden-section refinement around the best scan point.
  double lo = best_l - 2.0 * span / (scan_points - 1);
  double hi = best_l + 2.0 * span / (scan_points - 1);
  const double r = 0.5 * (std::sqrt(5.0) - 1.0);
  double x1 = hi - r * (hi - lo);
  double x2 = lo + r * (hi - lo);
  double f1 = qubit_gap(x1);
  double f2 = qubit_gap(x2);
  for (int it = 0; it < 80; ++it) {
    if (f1 < f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - r * (hi - lo);
      f1 = qubit_gap(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + r * (hi - lo);
      f2 = qubit_gap(x2);
    }
  }
  return std::min({best, f1, f2});
}

}  // namespace ecd
