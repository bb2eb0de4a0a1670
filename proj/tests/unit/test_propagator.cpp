#include <doctest.h>

#include <cmath>
#include <numbers>

#include "ecd/errors.hpp"
#include "ecd/models.hpp"
#include "ecd/propagator.hpp"

using namespace ecd;

namespace {
constexpr double pi = std::numbers::pi;
}

TEST_CASE("constant Hamiltonian: propagation equals the exponential") {
  ControlHamiltonian h(2);
  h.add(0.7, pauli::x());
  h.add(-0.2, pauli::z());
  const TimeDependentHamiltonian td(h);
  const PropagationResult r = propagate(td, 0.0, 3.0);
  CHECK((r.final_unitary() - expm_i(h.at(0.0), 3.0)).norm() < 1e-12);
  CHECK(r.steps >= 100);
}

TEST_CASE("resonant Rabi drive in the rotating frame follows the analytic solution") {
  // H = (Omega/2) sigma_x: P_down(t) = sin^2(Omega t / 2).
  ControlHamiltonian h(2);
  h.add(Schedule([](double t) { return 0.5 * (1.0 + 0.3 * t); }, [](double) { return 0.15; }), pauli::x());
  const TimeDependentHamiltonian td(h);
  Vector up = Vector::Zero(2);
  up(0) = 1.0;
  StepPolicy p;
  p.max_dt = 1e-3;
  const auto r = propagate_state(td, up, 0.0, 4.0, p, StoreOptions{false, 500});
  for (std::size_t k = 0; k < r.times.size(); ++k) {
    const double t = r.times[k];
    const double area = t + 0.15 * t * t;  // integral of (1 + 0.3 t)
    CHECK(std::norm(r.states[k](1)) == doctest::Approx(std::pow(std::sin(0.5 * area), 2)).epsilon(1e-6));
  }
}

TEST_CASE("midpoint scheme converges at second order") {
  ControlHamiltonian h(2);
  h.add(Schedule([](double t) { return std::cos(2.0 * t); }, [](double t) { return -2.0 * std::sin(2.0 * t); }),
        pauli::x());
  h.add(Schedule::linear(0.5, -1.0), pauli::z());
  const TimeDependentHamiltonian td(h);
  auto run = [&](int steps) {
    StepPolicy p;
    p.min_steps = steps;
    return propagate(td, 0.0, 3.0, p, StoreOptions{false, 0}).final_unitary();
  };
  const Matrix ref = run(32000);
  const double e1 = (run(200) - ref).norm();
  const double e2 = (run(400) - ref).norm();
  CHECK(e1 / e2 == doctest::Approx(4.0).epsilon(0.05));
}

TEST_CASE("carrier-aligned grid puts boundaries on whole periods") {
  ControlHamiltonian h(2);
  h.add(1.0, pauli::z());
  TimeDependentHamiltonian td(h);
  const double omega = 40.0;
  td.set_carrier(omega).set_carrier_origin(0.0);
  StepPolicy p;
  p.substeps_per_period = 25;
  const StepGrid g = resolve_steps(td, 0.0, 10.0 * 2.0 * pi / omega, p);
  CHECK(g.stroboscopic.size() == 11);
  for (std::size_t k = 0; k < g.stroboscopic.size(); ++k) {
    CHECK(g.boundaries[g.stroboscopic[k]] == doctest::Approx(k * 2.0 * pi / omega));
  }
  p.substeps_per_period = 5;
  CHECK_THROWS_AS(resolve_steps(td, 0.0, 1.0, p), DomainError);
}

TEST_CASE("block exponentiation matches the full exponential") {
  Matrix h = Matrix::Zero(4, 4);
  h(0, 0) = 1.0;
  h(1, 1) = -0.5;
  h(1, 3) = cplx(0.2, 0.1);
  h(3, 1) = cplx(0.2, -0.1);
  h(2, 2) = 0.3;
  h(3, 3) = 0.7;
  const std::vector<std::vector<Eigen::Index>> blocks{{0}, {1, 3}, {2}};
  CHECK((block_expm_i(h, 1.3, blocks) - expm_i(h, 1.3)).norm() < 1e-13);
}

TEST_CASE("state propagation requires a normalized state and preserves the norm") {
  const TimeDependentHamiltonian td(lz_model(1.0, 1.0));
  Vector psi = Vector::Zero(2);
  psi(0) = 2.0;
  CHECK_THROWS_AS(propagate_state(td, psi, -1.0, 2.0), DomainError);
  psi(0) = 1.0;
  const auto r = propagate_state(td, psi, -1.0, 2.0);
  CHECK(r.final_state().norm() == doctest::Approx(1.0).epsilon(1e-13));
  CHECK_THROWS_AS(propagate(td, 0.0, 0.0), DomainError);
}

TEST_CASE("floquet_log inverts the exponential and refuses the branch cut") {
  ControlHamiltonian h(2);
  h.add(0.4, pauli::x());
  h.add(0.3, pauli::z());
  const Matrix hm = h.at(0.0);
  CHECK((floquet_log(expm_i(hm, 1.5), 1.5).matrix() - hm).norm() < 1e-12);
  CHECK_THROWS_AS(floquet_log(expm_i(Matrix(pauli::z().matrix()), pi - 0.01), 1.0), BranchCutError);
}

TEST_CASE("fidelities") {
  Vector a = Vector::Zero(2);
  a(0) = 1.0;
  Vector b = Vector::Constant(2, 1.0 / std::sqrt(2.0));
  CHECK(state_fidelity(a, b) == doctest::Approx(0.5));
  CHECK_THROWS_AS(state_fidelity(2.0 * a, b), DomainError);

  const Matrix x = pauli::x().matrix();
  const Matrix p = Matrix::Identity(2, 2);
  CHECK(gate_fidelity(x, cplx(0.0, 1.0) * x, p) == doctest::Approx(1.0));
  CHECK(gate_fidelity(x, pauli::z().matrix(), p) == doctest::Approx(0.0));
  CHECK_THROWS_AS(gate_fidelity(x, x, 0.5 * p), DomainError);
}
