#include <doctest.h>

#include <cmath>
#include <numbers>

#include "ecd/errors.hpp"
#include "ecd/log.hpp"
#include "ecd/models.hpp"

using namespace ecd;

namespace {

constexpr double pi = std::numbers::pi;

struct QuietWarnings {
  int count = 0;
  QuietWarnings() {
    set_warning_handler([this](const std::string&) { ++count; });
  }
  ~QuietWarnings() { set_warning_handler(nullptr); }
};

// Single-excitation block {|10,0>, |01,0>, |00,1>} of the Bell model, built by hand.
double three_state_gap(double g, double omega1, double omega2, double omega_r) {
  // Energies relative to the common ground offset -(Omega_1 + Omega_2)/2.
  Eigen::Matrix3d h;
  h << omega1, 0.0, g, 0.0, omega2, g, g, g, omega_r;
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(h);
  const auto e = es.eigenvalues();
  return e(1) - e(0);
}

}  // namespace

TEST_CASE("model specs resolve defaults and reject unknown entries") {
  ModelSpec s;
  s.id = "bell_cqed";
  s.parameters["tau"] = 5.0;
  const ModelSpec r = resolve_model_spec(s);
  CHECK(r.parameters.at("tau") == 5.0);
  CHECK(r.parameters.at("g") == 1.0);
  CHECK(r.options.at("ramp") == "linear");
  CHECK(r.dim == 16);
  s.parameters["bogus"] = 1.0;
  CHECK_THROWS_AS(resolve_model_spec(s), DomainError);
  ModelSpec o;
  o.id = "bell_cqed";
  o.options["ramp"] = "cubic";
  CHECK_THROWS_AS(resolve_model_spec(o), DomainError);
  ModelSpec u;
  u.id = "nope";
  CHECK_THROWS_AS(resolve_model_spec(u), DomainError);
  CHECK(model_ids().size() == 4);
}

TEST_CASE("LZ ground state is the lower eigenvector") {
  for (double l : {-3.0, -0.2, 0.0, 0.7, 4.0}) {
    const Vector g = lz_ground_state(l, 1.3);
    const Matrix h = lz_hamiltonian_lambda(1.3).at(l);
    const double e = -std::hypot(l, 1.3);
    CHECK((h * g - e * g).norm() < 1e-13);
  }
  CHECK_THROWS_AS(lz_hamiltonian_lambda(0.0), DomainError);
}

TEST_CASE("STIRAP dark state has zero energy and no intermediate component") {
  StirapParams p;
  const StirapModel m = stirap_model(p);
  for (double t = -3.0; t <= 3.0; t += 0.5) {
    Vector d = Vector::Zero(3);
    d(0) = m.stokes(t);
    d(2) = -m.pump(t);
    d.normalize();
    CHECK((m.h.at(t) * d).norm() < 1e-12 * p.omega_peak);
    CHECK(std::abs(d(1)) == 0.0);
  }
  CHECK(m.t_start == doctest::Approx(-7.0));
  CHECK(m.t_end == doctest::Approx(3.5));
}

TEST_CASE("Omega_CD from the generic engine equals twice the mixing-angle rate") {
  StirapParams p;
  p.delay = 1.3;
  const StirapModel m = stirap_model(p);
  const double h = 1e-5;
  for (double t = -2.5; t <= 2.5; t += 0.25) {
    auto theta = [&](double x) { return std::atan2(m.pump(x), m.stokes(x)); };
    const double oracle = 2.0 * (theta(t + h) - theta(t - h)) / (2.0 * h);
    CHECK(m.omega_cd(t) == doctest::Approx(oracle).epsilon(1e-6));
  }
}

TEST_CASE("STIRAP protocols: exact CD follows the dark state, plain STIRAP avoids |1>") {
  StirapParams p;
  p.omega_peak = 40.0;
  p.delay = 1.5;
  p.cd = StirapCd::exact;
  const StirapModel exact = stirap_model(p);
  Vector psi0 = Vector::Zero(3);
  psi0(0) = 1.0;
  StepPolicy policy;
  policy.max_dt = 5e-4;
  auto r = propagate_state(stirap_protocol(exact), psi0, exact.t_start, exact.t_end - exact.t_start, policy,
                           StoreOptions{false, 200});
  for (std::size_t k = 0; k < r.times.size(); ++k) {
    const double t = r.times[k];
    Vector d = Vector::Zero(3);
    d(0) = exact.stokes(t);
    d(2) = -exact.pump(t);
    if (d.norm() < 1e-150) continue;
    d.normalize();
    CHECK(1.0 - std::norm(d.dot(r.states[k])) < 1e-8);
  }
  CHECK(1.0 - std::norm(r.final_state()(2)) < 1e-8);

  p.cd = StirapCd::none;
  const StirapModel plain = stirap_model(p);
  r = propagate_state(stirap_protocol(plain), psi0, plain.t_start, plain.t_end - plain.t_start, policy,
                      StoreOptions{false, 1});
  double p1 = 0.0;
  for (const auto& s : r.states) p1 = std::max(p1, std::norm(s(1)));
  CHECK(p1 < 0.05);

  p.delay = -1.0;
  CHECK_THROWS_AS(stirap_model(p), DomainError);
}

TEST_CASE("ramps hit their endpoints with the stated derivatives") {
  for (RampKind k : {RampKind::linear, RampKind::local_adiabatic, RampKind::boundary_cancel}) {
    const Schedule s = ramp_schedule(k, 1.0, 0.0, 10.0, 0.05);
    CHECK(std::abs(s(0.0) - 1.0) < 1e-12);
    CHECK(std::abs(s(10.0)) < 1e-12);
  }
  CHECK(ramp_schedule(RampKind::linear, 2.0, 4.0, 8.0)(4.0) == doctest::Approx(3.0));
  const Schedule b = ramp_schedule(RampKind::boundary_cancel, 1.0, 0.0, 10.0);
  const double h = 1e-4;
  for (double t : {0.0, 10.0}) {
    CHECK(std::abs(b.derivative(t)) < 1e-15);
    CHECK(std::abs((b.derivative(t + h) - b.derivative(t - h)) / (2.0 * h)) < 1e-6);
  }
  const double g = 0.05;
  const double l0 = 1.0;
  const Schedule la = ramp_schedule(RampKind::local_adiabatic, l0, -l0, 10.0, g);
  const double mid = std::abs(la.derivative(5.0));
  const double end = std::abs(la.derivative(0.0));
  CHECK(la(5.0) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(mid / end == doctest::Approx(4.0 * g * g / (4.0 * g * g + l0 * l0)).epsilon(1e-10));
  CHECK_THROWS_AS(ramp_schedule(RampKind::linear, 0.0, 1.0, 0.0), DomainError);
  CHECK(parse_ramp_kind("boundary_cancel") == RampKind::boundary_cancel);
}

TEST_CASE("numeric local-adiabatic ramp follows gap squared") {
  auto gap = [](double l) { return std::sqrt(0.01 + l * l); };
  const Schedule s = local_adiabatic_ramp(gap, 1.0, 0.0, 4.0);
  CHECK(s(0.0) == doctest::Approx(1.0));
  CHECK(std::abs(s(4.0)) < 1e-12);
  const double t_half = 2.0;
  const double l = s(t_half);
  const double ratio = s.derivative(t_half) / s.derivative(0.5);
  CHECK(ratio == doctest::Approx(std::pow(gap(l) / gap(s(0.5)), 2)).epsilon(0.02));
}

TEST_CASE("dispersive coupling example and warning") {
  CHECK(dispersive_coupling(0.05, 0.05, 0.5) == doctest::Approx(0.0025));
  CHECK_THROWS_AS(dispersive_coupling(1.0, 1.0, 0.0), DomainError);
  QuietWarnings w;
  BellParams p;
  p.omega1 = Schedule::constant(40.0);
  bell_cqed_model(p);
  CHECK(w.count == 0);
  p.omega1 = Schedule::constant(55.0);
  bell_cqed_model(p);
  CHECK(w.count > 0);
}

TEST_CASE("Bell model conserves excitation number, also under eCD") {
  QuietWarnings w;
  BellSetup s;
  s.tau = 3.0;
  const BellModel m = bell_setup_model(s);
  const double carrier = bell_aligned_carrier(200.0, s.tau);
  const BellEcdCoupling c = synthesize_ecd_bell(bell_flip_flop_schedule(m, s.tau, carrier), carrier);
  ControlHamiltonian h = m.h;
  h.add(c.qubit1, m.p1);
  h.add(c.qubit2, m.p2);
  for (double t : {0.0, 0.77, 1.5, 2.9}) {
    const Matrix hm = h.at(t);
    const Matrix comm = hm * m.number.matrix() - m.number.matrix() * hm;
    CHECK(comm.cwiseAbs().maxCoeff() < 1e-12 * hm.cwiseAbs().maxCoeff());
  }
  CHECK(std::abs(carrier * s.tau / (2.0 * pi) - std::round(carrier * s.tau / (2.0 * pi))) < 1e-9);
}

TEST_CASE("flip-flop component dominates the exact CD field") {
  QuietWarnings w;
  BellSetup s;
  const BellModel m = bell_setup_model(s);
  for (double t : {0.5, 5.0, 9.5}) {
    double residual = 1.0;
    const double h = m.flip_flop_component(t, &residual);
    CHECK(h > 0.0);
    CHECK(residual < 0.5);
  }
}

TEST_CASE("crossing width agrees with a hand-built single-excitation block") {
  const double g = 1.0;
  const double delta = -10.0;
  const double omega_r = 60.0;
  const double omega2 = omega_r + delta;
  double oracle = INFINITY;
  for (int k = -4000; k <= 4000; ++k) {
    const double l = 1e-4 * k;
    oracle = std::min(oracle, three_state_gap(g, omega2 + l, omega2, omega_r));
  }
  QuietWarnings w;
  const double width = bell_crossing_width(g, delta, omega_r, 4);
  CHECK(width == doctest::Approx(oracle).epsilon(1e-6));
}

TEST_CASE("adiabatic Bell ramp maps |01> to the symmetric Bell state") {
  QuietWarnings w;
  BellSetup s;
  s.tau = 400.0;
  s.ramp = RampKind::boundary_cancel;
  const BellRun r = run_bell(s, BellProtocol::adiabatic);
  CHECK(r.eigenstate_overlap_start > 0.95);
  CHECK(r.bell_fidelity > 0.97);
}

TEST_CASE("fSTIRAP targets and single-segment end state") {
  CHECK((fstirap_target(0.0, 1.1) - Matrix::Identity(2, 2)).norm() < 1e-15);
  Matrix flip(2, 2);
  flip << 0, 1, -1, 0;
  CHECK((fstirap_target(pi / 4, 0.0) - flip).norm() < 1e-15);
  const Matrix u = fstirap_target(0.3, 0.9);
  CHECK((u.adjoint() * u - Matrix::Identity(2, 2)).norm() < 1e-14);
  CHECK_THROWS_AS(fstirap_gate(0.3, 0.0, 0.0), DomainError);

  const double eta = pi / 8;
  const double chi = 0.6;
  const FStirapPulseParams params;
  const FStirapSegment seg = fstirap_segment(eta, chi, 50.0, params, false);
  Vector psi0 = Vector::Zero(3);
  psi0(0) = 1.0;
  const Vector psi = execute_fstirap_segment(seg, params) * psi0;
  Vector target = Vector::Zero(3);
  target(0) = std::cos(eta);
  target(2) = -std::polar(1.0, -chi) * std::sin(eta);
  CHECK(std::norm(target.dot(psi)) > 0.999);
}
