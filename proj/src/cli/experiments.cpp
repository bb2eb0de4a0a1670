#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <sstream>
#include <thread>

#include "ecd/errors.hpp"
#include "ecd/lab.hpp"

namespace ecd::lab {

namespace {

using Params = std::map<std::string, double>;

StepPolicy step_policy(const ExperimentConfig& c, std::optional<double> default_max_dt) {
  StepPolicy p;
  if (c.integrator.substeps_per_period) p.substeps_per_period = *c.integrator.substeps_per_period;
  if (c.integrator.min_steps) p.min_steps = *c.integrator.min_steps;
  p.max_dt = c.integrator.max_dt ? c.integrator.max_dt : default_max_dt;
  return p;
}

// ---------------------------------------------------------------- LZ

LzSetup lz_setup(const ExperimentConfig& c, const Params& p) {
  LzSetup s;
  s.v = p.at("v");
  s.coupling = p.at("Omega");
  s.t_start = p.at("t_start");
  s.t_end = p.at("t_end");
  s.omega = p.at("omega");
  s.phi = p.at("phi");
  s.envelope = c.model.options.at("envelope") == "discrete" ? EnvelopeMode::discrete : EnvelopeMode::interpolated;
  return s;
}

LzProtocol lz_protocol_of(const std::string& p) {
  if (p == "adiabatic") return LzProtocol::adiabatic;
  if (p == "exact_cd") return LzProtocol::exact_cd;
  return LzProtocol::ecd;
}

PropagationResult lz_run(const ExperimentConfig& c, const LzSetup& s) {
  const TimeDependentHamiltonian td = lz_protocol(s, lz_protocol_of(c.protocol));
  const Vector psi0 = lz_ground_state(s.v * s.t_start, s.coupling);
  return propagate_state(td, psi0, s.t_start, s.t_end - s.t_start, step_policy(c, 0.01), StoreOptions{true, 1});
}

// End infidelity and the largest deviation from the instantaneous ground state along the way.
std::vector<double> lz_point(const ExperimentConfig& c, const Params& p) {
  const LzSetup s = lz_setup(c, p);
  const PropagationResult r = lz_run(c, s);
  double worst = 0.0;
  for (std::size_t k = 0; k < r.times.size(); ++k) {
    const Vector g = lz_ground_state(s.v * r.times[k], s.coupling);
    worst = std::max(worst, 1.0 - std::norm(g.dot(r.states[k])));
  }
  const Vector g = lz_ground_state(s.v * s.t_end, s.coupling);
  return {1.0 - std::norm(g.dot(r.final_state())), worst};
}

Table lz_series(const ExperimentConfig& c) {
  const LzSetup s = lz_setup(c, c.model.parameters);
  const PropagationResult r = lz_run(c, s);
  Table t;
  t.columns = {"t (time)", "lambda (energy)", "p_ground (1)", "p_excited (1)", "c0_re (1)", "c0_im (1)", "c1_re (1)",
               "c1_im (1)"};
  double worst = 0.0;
  for (std::size_t k = 0; k < r.times.size(); ++k) {
    const double lambda = s.v * r.times[k];
    const Vector g = lz_ground_state(lambda, s.coupling);
    const Vector& psi = r.states[k];
    const double pg = std::norm(g.dot(psi));
    worst = std::max(worst, 1.0 - pg);
    t.rows.push_back({r.times[k], lambda, pg, 1.0 - pg, psi(0).real(), psi(0).imag(), psi(1).real(), psi(1).imag()});
  }
  t.summary["infidelity"] = 1.0 - t.rows.back()[2];
  t.summary["max_deviation"] = worst;
  t.summary["steps"] = static_cast<double>(r.steps);
  return t;
}

// ---------------------------------------------------------------- STIRAP

StirapParams stirap_params(const ExperimentConfig& c, const Params& p) {
  StirapParams s;
  s.sigma = p.at("sigma");
  if (!(s.sigma > 0.0)) throw DomainError("stirap: sigma must be positive");
  s.omega_peak = p.at("Omega_sigma") / s.sigma;
  s.delay = p.at("d_sigma") * s.sigma;
  s.detuning = p.at("Delta1");
  s.carrier_sigma = p.at("omega_sigma");
  s.phi_minus = p.at("phi_minus");
  s.cd = c.protocol == "adiabatic" ? StirapCd::none : c.protocol == "exact_cd" ? StirapCd::exact : StirapCd::fmod;
  return s;
}

PropagationResult stirap_run(const ExperimentConfig& c, const StirapModel& m, double peak, std::size_t every) {
  Vector psi0 = Vector::Zero(3);
  psi0(0) = 1.0;
  const double max_dt = std::min((m.t_end - m.t_start) / 1000.0, 0.1 / peak);
  return propagate_state(stirap_protocol(m), psi0, m.t_start, m.t_end - m.t_start, step_policy(c, max_dt),
                         StoreOptions{every == 0, every});
}

double dark_infidelity(const StirapModel& m, const Vector& psi, double t) {
  const double p = m.pump(t);
  const double s = m.stokes(t);
  Vector d = Vector::Zero(3);
  d(0) = s;
  d(2) = -p;
  const double n = d.norm();
  if (!(n > 0.0)) return 1.0 - std::norm(psi(2));
  return 1.0 - std::norm((d / n).dot(psi));
}

std::vector<double> stirap_point(const ExperimentConfig& c, const Params& p) {
  const StirapParams sp = stirap_params(c, p);
  const StirapModel m = stirap_model(sp);
  const PropagationResult r = stirap_run(c, m, sp.omega_peak, 1);
  double p1 = 0.0;
  for (const auto& psi : r.states) p1 = std::max(p1, std::norm(psi(1)));
  const Vector& psi = r.final_state();
  return {1.0 - std::norm(psi(2)), dark_infidelity(m, psi, m.t_end), p1};
}

Table stirap_series(const ExperimentConfig& c) {
  const StirapParams sp = stirap_params(c, c.model.parameters);
  const StirapModel m = stirap_model(sp);
  const PropagationResult r = stirap_run(c, m, sp.omega_peak, 1);
  Table t;
  t.columns = {"t (time)", "pump (energy)", "stokes (energy)", "omega_cd (energy)", "p0 (1)", "p1 (1)", "p2 (1)",
               "dark_infidelity (1)"};
  double p1 = 0.0;
  for (std::size_t k = 0; k < r.times.size(); ++k) {
    const double tk = r.times[k];
    const Vector& psi = r.states[k];
    p1 = std::max(p1, std::norm(psi(1)));
    t.rows.push_back({tk, m.pump(tk), m.stokes(tk), m.omega_cd(tk), std::norm(psi(0)), std::norm(psi(1)),
                      std::norm(psi(2)), dark_infidelity(m, psi, tk)});
  }
  t.summary["infidelity"] = 1.0 - std::norm(r.final_state()(2));
  t.summary["dark_infidelity"] = dark_infidelity(m, r.final_state(), m.t_end);
  t.summary["p1_max"] = p1;
  return t;
}

// ---------------------------------------------------------------- Bell

BellSetup bell_setup(const ExperimentConfig& c, const Params& p) {
  BellSetup s;
  s.g = p.at("g");
  s.detuning = p.at("detuning");
  s.omega_r = p.at("omega_r");
  s.lambda0 = p.at("lambda0");
  s.tau = p.at("tau");
  s.n_ph = static_cast<int>(std::lround(p.at("n_ph")));
  s.omega = p.at("omega");
  s.ramp = parse_ramp_kind(c.model.options.at("ramp"));
  if (c.integrator.substeps_per_period) s.substeps_per_period = *c.integrator.substeps_per_period;
  if (c.integrator.max_dt) s.max_dt = *c.integrator.max_dt;
  return s;
}

BellProtocol bell_protocol_of(const std::string& p) {
  if (p == "adiabatic") return BellProtocol::adiabatic;
  if (p == "exact_cd") return BellProtocol::exact_cd;
  return BellProtocol::ecd;
}

std::vector<double> bell_point(const ExperimentConfig& c, const Params& p) {
  const BellRun r = run_bell(bell_setup(c, p), bell_protocol_of(c.protocol));
  return {r.infidelity, r.bell_fidelity, r.eigenstate_overlap_start, r.carrier};
}

// ---------------------------------------------------------------- fSTIRAP gate

std::vector<double> fstirap_point(const ExperimentConfig& c, const Params& p) {
  FStirapPulseParams pp;
  pp.omega0 = p.at("Omega0");
  pp.width = p.at("width");
  pp.separation = p.at("separation");
  pp.half_window = p.at("half_window");
  pp.max_dt = p.at("max_dt");
  if (c.integrator.max_dt) pp.max_dt = *c.integrator.max_dt;
  const double carrier = c.protocol == "ecd" ? p.at("omega") : 0.0;
  const FStirapGate gate = fstirap_gate(p.at("eta"), p.at("chi"), p.at("Delta1"), pp, carrier);
  const Matrix u = execute_fstirap_gate(gate, pp);
  std::vector<double> out{1.0 - gate_fidelity(gate.target_embedded, u, gate.projector), std::norm(u(1, 1))};
  for (int r : {0, 2}) {
    for (int col : {0, 2}) {
      out.push_back(u(r, col).real());
      out.push_back(u(r, col).imag());
    }
  }
  return out;
}

// ---------------------------------------------------------------- dispatch

struct PointKind {
  std::vector<std::string> metrics;
  std::function<std::vector<double>(const ExperimentConfig&, const Params&)> eval;
};

PointKind point_kind(const std::string& model) {
  if (model == "lz") return {{"infidelity (1)", "max_deviation (1)"}, lz_point};
  if (model == "stirap") return {{"infidelity (1)", "dark_infidelity (1)", "p1_max (1)"}, stirap_point};
  if (model == "bell_cqed") {
    return {{"infidelity (1)", "bell_fidelity (1)", "start_overlap (1)", "carrier (rad/time)"}, bell_point};
  }
  return {{"infidelity (1)", "leak_p1 (1)", "u00_re (1)", "u00_im (1)", "u02_re (1)", "u02_im (1)", "u20_re (1)",
           "u20_im (1)", "u22_re (1)", "u22_im (1)"},
          fstirap_point};
}

std::string unit_of(const std::string& model, const std::string& name) {
  for (const auto& p : model_schema(model)) {
    if (p.name == name) return p.unit;
  }
  return "1";
}

std::string describe_point(const std::vector<std::string>& names, const std::vector<double>& values) {
  std::ostringstream os;
  os.precision(10);
  for (std::size_t k = 0; k < names.size(); ++k) os << (k ? ", " : "") << names[k] << "=" << values[k];
  return os.str();
}

Table sweep_table(const ExperimentConfig& c, const std::vector<std::string>& axis_names,
                  const std::vector<std::vector<double>>& points) {
  const PointKind kind = point_kind(c.model.id);
  Table t;
  for (const auto& a : axis_names) t.columns.push_back(a + " (" + unit_of(c.model.id, a) + ")");
  t.axes = static_cast<int>(axis_names.size());
  for (const auto& m : kind.metrics) t.columns.push_back(m);

  std::vector<std::string> failures(points.size());
  std::vector<std::string> invalid(points.size());
  const auto results = parallel_points(points.size(), [&](std::size_t i) {
    Params p = c.model.parameters;
    for (std::size_t a = 0; a < axis_names.size(); ++a) p[axis_names[a]] = points[i][a];
    try {
      std::vector<double> v = kind.eval(c, p);
      for (double x : v) {
        if (!std::isfinite(x)) throw NumericalError("non-finite result", 0.0);
      }
      return v;
    } catch (const DomainError& e) {
      // Parameter outside the model's domain: a configuration problem, not a numerical one.
      invalid[i] = describe_point(axis_names, points[i]) + ": " + e.what();
      return std::vector<double>(kind.metrics.size(), failed_point);
    } catch (const std::exception& e) {
      failures[i] = describe_point(axis_names, points[i]) + ": " + e.what();
      return std::vector<double>(kind.metrics.size(), failed_point);
    }
  });
  for (const auto& msg : invalid) {
    if (!msg.empty()) throw ConfigError("model.parameters", msg.front() == ':' ? msg.substr(2) : msg);
  }
  for (std::size_t i = 0; i < points.size(); ++i) {
    std::vector<double> row = points[i];
    row.insert(row.end(), results[i].begin(), results[i].end());
    t.rows.push_back(std::move(row));
    if (!failures[i].empty()) t.failures.push_back(failures[i]);
  }
  return t;
}

}  // namespace

std::size_t Table::column(const std::string& name) const {
  for (std::size_t k = 0; k < columns.size(); ++k) {
    const std::string& c = columns[k];
    if (c == name || c.rfind(name + " (", 0) == 0) return k;
  }
  throw ConfigError("", "no column '" + name + "'");
}

unsigned worker_count() {
  unsigned n = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("ECD_LAB_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v >= 1) n = static_cast<unsigned>(v);
  }
  return n;
}

std::vector<std::vector<double>> parallel_points(std::size_t n,
                                                 const std::function<std::vector<double>(std::size_t)>& f) {
  std::vector<std::vector<double>> out(n);
  const unsigned workers = static_cast<unsigned>(std::min<std::size_t>(worker_count(), n));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) out[i] = f(i);
    return out;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) out[i] = f(i);
    });
  }
  for (auto& th : pool) th.join();
  return out;
}

Table run_experiment(const ExperimentConfig& c) {
  if (c.experiment == "lz-convergence") {
    std::vector<std::vector<double>> pts;
    for (double w : c.omegas) pts.push_back({w});
    return sweep_table(c, {"omega"}, pts);
  }
  if (!c.sweep.empty()) {
    std::vector<std::string> names;
    std::vector<std::vector<double>> grids;
    for (const auto& a : c.sweep) {
      names.push_back(a.parameter);
      grids.push_back(a.values());
    }
    std::vector<std::vector<double>> pts;
    if (grids.size() == 1) {
      for (double x : grids[0]) pts.push_back({x});
    } else {
      for (double x : grids[0]) {
        for (double y : grids[1]) pts.push_back({x, y});
      }
    }
    return sweep_table(c, names, pts);
  }
  if (c.model.id == "lz") return lz_series(c);
  if (c.model.id == "stirap") return stirap_series(c);
  // Single point: one row of metrics without axis columns.
  Table t = sweep_table(c, {}, {{}});
  for (std::size_t k = 0; k < t.columns.size(); ++k) {
    t.summary[t.columns[k].substr(0, t.columns[k].find(' '))] = t.rows[0][k];
  }
  return t;
}

Table compare_tables(const Table& a, const Table& b) {
  if (a.axes == 0 || b.axes == 0) throw ConfigError("sweep", "compare needs sweep results on both sides");
  if (a.axes != b.axes || a.rows.size() != b.rows.size()) throw ConfigError("sweep", "axis mismatch");
  for (int k = 0; k < a.axes; ++k) {
    if (a.columns[k] != b.columns[k]) throw ConfigError("sweep", "axis mismatch: " + a.columns[k] + " vs " + b.columns[k]);
  }
  const std::size_t ma = a.column(a.metric);
  const std::size_t mb = b.column(b.metric);
  Table t;
  t.axes = a.axes;
  t.metric = "ratio";
  for (int k = 0; k < a.axes; ++k) t.columns.push_back(a.columns[k]);
  t.columns.push_back("infidelity_a (1)");
  t.columns.push_back("infidelity_b (1)");
  t.columns.push_back("ratio (1)");
  double log_sum = 0.0;
  int used = 0;
  for (std::size_t i = 0; i < a.rows.size(); ++i) {
    std::vector<double> row;
    for (int k = 0; k < a.axes; ++k) {
      const double x = a.rows[i][k];
      const double y = b.rows[i][k];
      if (std::abs(x - y) > 1e-12 * std::max(1.0, std::abs(x))) {
        throw ConfigError("sweep", "axis values differ at row " + std::to_string(i));
      }
      row.push_back(x);
    }
    const double fa = a.rows[i][ma];
    const double fb = b.rows[i][mb];
    double ratio = failed_point;
    if (fa >= 0.0 && fb >= 0.0) {
      // Both exact: no improvement either way.
      ratio = fb > 0.0 ? fa / fb : (fa > 0.0 ? INFINITY : 1.0);
      if (std::isfinite(ratio) && ratio > 0.0) {
        log_sum += std::log(ratio);
        ++used;
      }
    }
    row.insert(row.end(), {fa, fb, ratio});
    t.rows.push_back(std::move(row));
  }
  t.summary["geometric_mean_ratio"] = used ? std::exp(log_sum / used) : failed_point;
  return t;
}

}  // namespace ecd::lab
