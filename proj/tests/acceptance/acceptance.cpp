// One PASS/FAIL line per acceptance criterion, with the measured numbers.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "ecd/errors.hpp"
#include "ecd/lab.hpp"
#include "ecd/log.hpp"
#include "ecd/models.hpp"

using namespace ecd;

namespace {

struct Outcome {
  bool pass;
  std::string detail;
};

int failures = 0;

void criterion(int id, const char* title, double budget_s, const std::function<Outcome()>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o{false, ""};
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const bool in_time = budget_s <= 0.0 || dt < budget_s;
  const bool pass = o.pass && in_time;
  if (!pass) ++failures;
  std::printf("%s criterion %2d: %s | %s | runtime %.2f s%s\n", pass ? "PASS" : "FAIL", id, title, o.detail.c_str(), dt,
              in_time ? "" : " (over budget)");
  std::fflush(stdout);
}

std::string fmt(const char* f, double a) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

std::string list(const std::vector<double>& v, const char* f = "%.3g") {
  std::string s = "[";
  for (std::size_t k = 0; k < v.size(); ++k) s += (k ? ", " : "") + fmt(f, v[k]);
  return s + "]";
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

Operator random_hermitian(std::mt19937& rng, int n) {
  std::normal_distribution<double> g;
  Matrix m(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) m(i, j) = cplx(g(rng), g(rng));
  }
  return Operator::hermitian(0.5 * (m + m.adjoint()));
}

// Propagator of one carrier period of a two-level eCD pulse (controls only).
Matrix one_period(const FourierPulse& pulse, std::size_t n, EnvelopeMode mode, int substeps) {
  TimeDependentHamiltonian td(pulse.control_hamiltonian(two_level_ecd_operators(), mode));
  td.set_carrier(pulse.omega()).set_carrier_origin(pulse.t_start());
  StepPolicy p;
  p.substeps_per_period = substeps;
  const double t0 = pulse.t_start() + static_cast<double>(n) * pulse.period();
  return propagate(td, t0, pulse.period(), p, StoreOptions{false, 0}).final_unitary();
}

lab::ExperimentConfig config(const std::string& experiment, const std::string& protocol) {
  lab::ExperimentConfig c = lab::default_config(experiment);
  c.protocol = protocol;
  return lab::resolve_config(c);
}

}  // namespace

int main() {
  set_warning_handler([](const std::string&) {});

  criterion(1, "exact CD keeps the LZ ground state", 1.0, [] {
    LzSetup s;
    const TimeDependentHamiltonian td = lz_protocol(s, LzProtocol::exact_cd);
    StepPolicy p;
    p.max_dt = 1e-3;
    const auto r = propagate_state(td, lz_ground_state(s.v * s.t_start, s.coupling), s.t_start, s.t_end - s.t_start, p,
                                   StoreOptions{false, 1});
    double worst = 1.0;
    for (std::size_t k = 0; k < r.times.size(); ++k) {
      worst = std::min(worst, std::norm(lz_ground_state(s.v * r.times[k], s.coupling).dot(r.states[k])));
    }
    return Outcome{1.0 - worst <= 1e-8, fmt("min fidelity 1 - %.2e", 1.0 - worst) + " over " +
                                            std::to_string(r.times.size()) + " stored times"};
  });

  criterion(2, "generic CD engine vs closed-form LZ field", 1.0, [] {
    std::mt19937 rng(2024);
    std::uniform_real_distribution<double> u(-5.0, 5.0);
    std::uniform_real_distribution<double> w(0.1, 5.0);
    double worst = 0.0;
    for (int k = 0; k < 50; ++k) {
      const double lambda = u(rng);
      const double rate = u(rng);
      const double omega = w(rng);
      const Operator cd = cd_field(lz_hamiltonian_lambda(omega), lambda, rate);
      const double coeff = 0.5 * hs_inner(pauli::y(), cd).real();
      worst = std::max(worst, std::abs(coeff - cd_field_lz(lambda, rate, omega)));
    }
    return Outcome{worst <= 1e-9, fmt("max |difference| %.2e over 50 draws", worst)};
  });

  criterion(3, "gauge potential is Hilbert-Schmidt orthogonal to H and dH", 5.0, [] {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    double worst = 0.0;
    for (int k = 0; k < 100; ++k) {
      const int n = 2 + k % 3;
      ControlHamiltonian h(n);
      h.add(1.0, random_hermitian(rng, n));
      h.add(Schedule::identity(), random_hermitian(rng, n));
      const double a = u(rng);
      h.add(Schedule([a](double l) { return std::sin(a * l); }, [a](double l) { return a * std::cos(a * l); }),
            random_hermitian(rng, n));
      const double lambda = u(rng);
      const Operator cd = cd_field(h, lambda, 1.0);
      const Operator h0 = h.operator_at(lambda);
      const Operator dh = Operator::hermitian(h.derivative_at(lambda));
      worst = std::max(worst, std::abs(hs_inner(cd, h0)) / (cd.norm() * h0.norm()));
      worst = std::max(worst, std::abs(hs_inner(cd, dh)) / (cd.norm() * dh.norm()));
    }
    return Outcome{worst <= 1e-9, fmt("max relative overlap %.2e over 100 Hamiltonians", worst)};
  });

  criterion(4, "Magnus-2 identity and residual halving per omega doubling", 10.0, [] {
    const double f = -0.5;
    std::vector<double> identity_err;
    std::vector<double> residual;
    for (double omega : {25.0, 50.0, 100.0, 200.0}) {
      const double period = 2.0 * std::numbers::pi / omega;
      const FourierPulse pulse = synthesize_ecd_two_level(Schedule::constant(f), omega, 0.0, 0.0, period);
      const double a = two_level_amplitude_a(pulse, 0);
      const double b = two_level_amplitude_b(pulse, 0);
      const Matrix expected = (a * b / omega) * pauli::y().matrix();
      const auto comps = all_fourier_components(pulse, two_level_ecd_operators(), 0);
      const Matrix hf = magnus_floquet(comps, omega, pulse.t_start(), 2).h_f.matrix();
      identity_err.push_back((hf - expected).norm() / expected.norm());
      const Matrix exact = floquet_log(one_period(pulse, 0, EnvelopeMode::discrete, 4000), period).matrix();
      residual.push_back((exact - expected).norm());
    }
    std::vector<double> ratios;
    bool halving = true;
    for (std::size_t k = 1; k < residual.size(); ++k) {
      ratios.push_back(residual[k] / residual[k - 1]);
      halving = halving && std::abs(ratios.back() - 0.5) <= 0.125;
    }
    const double id = *std::max_element(identity_err.begin(), identity_err.end());
    return Outcome{id <= 1e-13 && halving, fmt("identity rel. err %.1e", id) + ", oracle residuals " + list(residual) +
                                                ", ratios " + list(ratios, "%.3f") + " (need 0.5 +- 0.125)"};
  });

  criterion(5, "stroboscopic per-period error slope 2 in T", 10.0, [] {
    LzSetup s;
    const Schedule f = lz_cd_schedule(s);
    std::vector<double> lt;
    std::vector<double> le;
    std::vector<double> errs;
    for (double omega : {25.0, 50.0, 100.0, 200.0, 400.0}) {
      const FourierPulse pulse = synthesize_ecd_two_level(f, omega, 0.0, s.t_start, s.t_end);
      const std::size_t n = pulse.interval_index(0.0);
      const double mid = pulse.interval_center(n);
      const Matrix u = one_period(pulse, n, EnvelopeMode::interpolated, 2000);
      const Matrix target = expm_i(Matrix(f(mid) * pauli::y().matrix()), pulse.period());
      const double e = (u - target).norm();
      errs.push_back(e);
      lt.push_back(std::log(pulse.period()));
      le.push_back(std::log(e));
    }
    const double mx = std::accumulate(lt.begin(), lt.end(), 0.0) / lt.size();
    const double my = std::accumulate(le.begin(), le.end(), 0.0) / le.size();
    double sxy = 0.0;
    double sxx = 0.0;
    for (std::size_t k = 0; k < lt.size(); ++k) {
      sxy += (lt[k] - mx) * (le[k] - my);
      sxx += (lt[k] - mx) * (lt[k] - mx);
    }
    const double slope = sxy / sxx;
    return Outcome{std::abs(slope - 2.0) <= 0.2,
                   fmt("fitted slope %.3f", slope) + " (need 2 +- 0.2), errors " + list(errs) + " for T over a factor 16"};
  });

  criterion(6, "eCD amplitude scales as sqrt(omega)", 0.0, [] {
    const Schedule f = Schedule::constant(0.37);
    const FourierPulse p1 = synthesize_ecd_two_level(f, 30.0, 0.0, 0.0, 2.0 * std::numbers::pi / 30.0);
    const FourierPulse p4 = synthesize_ecd_two_level(f, 120.0, 0.0, 0.0, 2.0 * std::numbers::pi / 30.0);
    const double r = two_level_amplitude_a(p4, 0) / two_level_amplitude_a(p1, 0);
    return Outcome{r == 2.0, fmt("A(4w)/A(w) = %.17g", r)};
  });

  criterion(7, "LZ eCD transition probability and micromotion fall with omega", 30.0, [] {
    const lab::Table t = lab::run_experiment(config("lz-convergence", "ecd"));
    std::vector<double> inf;
    std::vector<double> dev;
    for (const auto& r : t.rows) {
      inf.push_back(r[t.column("infidelity")]);
      dev.push_back(r[t.column("max_deviation")]);
    }
    bool ok = t.failures.empty();
    for (std::size_t k = 1; k < inf.size(); ++k) ok = ok && inf[k] < inf[k - 1] && dev[k] < dev[k - 1];
    return Outcome{ok, "omega {25,50,100,200}: end infidelity " + list(inf) + ", max deviation " + list(dev)};
  });

  criterion(8, "fmod-STIRAP infidelity map beats plain STIRAP", 300.0, [] {
    const lab::Table plain = lab::run_experiment(config("stirap-map", "adiabatic"));
    const lab::Table fmod = lab::run_experiment(config("stirap-map", "ecd"));
    std::vector<double> a;
    std::vector<double> b;
    for (const auto& r : plain.rows) a.push_back(r[plain.column("infidelity")]);
    for (const auto& r : fmod.rows) b.push_back(r[fmod.column("infidelity")]);
    const double ma = median(a);
    const double mb = median(b);
    const double best = *std::min_element(b.begin(), b.end());
    const bool ok = plain.failures.empty() && fmod.failures.empty() && mb <= 1e-2 * ma && best <= 1e-6;
    return Outcome{ok, fmt("median plain %.3e", ma) + fmt(", median fmod %.3e", mb) + fmt(" (ratio %.2e)", mb / ma) +
                           fmt(", best fmod %.2e", best)};
  });

  criterion(9, "Bell preparation: eCD beats adiabatic by 10x for every ramp", 300.0, [] {
    bool ok = true;
    std::string detail;
    double best_ecd = INFINITY;
    std::string best_ramp;
    for (const char* ramp : {"linear", "local_adiabatic", "boundary_cancel"}) {
      lab::ExperimentConfig ca = lab::default_config("bell-scan");
      ca.model.options["ramp"] = ramp;
      ca.protocol = "adiabatic";
      lab::ExperimentConfig ce = ca;
      ce.protocol = "ecd";
      const lab::Table ta = lab::run_experiment(lab::resolve_config(ca));
      const lab::Table te = lab::run_experiment(lab::resolve_config(ce));
      ok = ok && ta.failures.empty() && te.failures.empty();
      double worst = 0.0;
      for (std::size_t k = 0; k < ta.rows.size(); ++k) {
        const double ia = ta.rows[k][ta.column("infidelity")];
        const double ie = te.rows[k][te.column("infidelity")];
        worst = std::max(worst, ie / ia);
      }
      ok = ok && worst <= 0.1;
      const double last = te.rows.back()[te.column("infidelity")];
      if (last < best_ecd) {
        best_ecd = last;
        best_ramp = ramp;
      }
      detail += std::string(ramp) + fmt(" worst eCD/adiabatic %.2e", worst) + fmt(" (eCD at tau max %.2e); ", last);
    }
    ok = ok && best_ramp == "boundary_cancel";
    return Outcome{ok, detail + "best at largest tau: " + best_ramp};
  });

  criterion(10, "avoided-crossing width equals 2 g~ at g/Delta = 0.1", 0.0, [] {
    const double g = 1.0;
    const double delta = -10.0;
    const double width = bell_crossing_width(g, delta, 60.0, 4);
    const double expected = 2.0 * std::abs(dispersive_coupling(g, g, delta));
    const double ratio = width / expected;
    return Outcome{std::abs(ratio - 1.0) <= 0.1, fmt("width %.5f", width) + fmt(", 2 g~ = %.5f", expected) +
                                                      fmt(", ratio %.3f (need 1 +- 0.1)", ratio)};
  });

  criterion(11, "double fSTIRAP realises U(eta, chi)", 0.0, [] {
    const double pi = std::numbers::pi;
    std::vector<double> inf;
    for (auto [eta, chi] : {std::pair{pi / 8, 0.0}, std::pair{pi / 4, 0.0}, std::pair{pi / 8, pi / 2}}) {
      const FStirapGate gate = fstirap_gate(eta, chi, 50.0);
      inf.push_back(1.0 - gate_fidelity(gate.target_embedded, execute_fstirap_gate(gate), gate.projector));
    }
    const FStirapGate id = fstirap_gate(0.0, 0.7, 50.0);
    const Matrix u = execute_fstirap_gate(id);
    const Matrix p = id.projector;
    const double id_err = (p * (u - Matrix::Identity(3, 3)) * p).cwiseAbs().maxCoeff();
    const double worst = *std::max_element(inf.begin(), inf.end());
    return Outcome{worst <= 1e-3 && id_err <= 1e-10,
                   "gate infidelities " + list(inf) + fmt(", eta=0 max |U - 1| on span{0,2} %.2e", id_err)};
  });

  criterion(12, "adiabatic-frame and lab-frame LZ populations agree", 0.0, [] {
    const double omega = 1.0;
    const ControlHamiltonian h = lz_hamiltonian_lambda(omega);
    std::vector<double> grid(4001);
    for (std::size_t k = 0; k < grid.size(); ++k) grid[k] = -10.0 + 20.0 * k / (grid.size() - 1);
    const SpectralFrame frame = eigendecompose_continuous(h, grid);
    Vector a0 = Vector::Zero(2);
    a0(0) = 1.0;
    AdiabaticOptions opt;
    opt.steps = 200000;
    opt.store_every = 1000;
    const auto traj = adiabatic_frame_propagate(frame, h, Schedule::linear(1.0, 0.0), a0, -10.0, 10.0, opt);

    const TimeDependentHamiltonian td(lz_model(1.0, omega));
    StepPolicy p;
    p.max_dt = 1e-4;
    p.min_steps = 200000;
    const auto lab_run = propagate_state(td, frame.vectors(0).col(0), -10.0, 20.0, p, StoreOptions{false, 1000});
    double worst = 0.0;
    for (std::size_t k = 0; k < traj.times.size(); ++k) {
      const double t = traj.times[k];
      std::size_t j = 0;
      for (std::size_t i = 0; i < lab_run.times.size(); ++i) {
        if (std::abs(lab_run.times[i] - t) < std::abs(lab_run.times[j] - t)) j = i;
      }
      if (std::abs(lab_run.times[j] - t) > 1e-9) throw Error("time grids do not line up");
      const Eigensystem es = frame.at(h, t);
      for (int n = 0; n < 2; ++n) {
        const double lab_pop = std::norm(es.vectors.col(n).dot(lab_run.states[j]));
        worst = std::max(worst, std::abs(lab_pop - traj.populations(k)(n)));
      }
    }
    return Outcome{worst <= 1e-6, fmt("max population difference %.2e", worst) + " at " +
                                      std::to_string(traj.times.size()) + " times"};
  });

  std::printf("%d of 12 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
