#include <fstream>
#include <iostream>
#include <mutex>
#include <set>
#include <sstream>

#include <CLI11.hpp>

#include "ecd/errors.hpp"
#include "ecd/lab.hpp"
#include "ecd/log.hpp"

namespace ecd::lab {

namespace {

constexpr int exit_ok = 0;
constexpr int exit_config = 2;
constexpr int exit_numerical = 3;
constexpr int exit_io = 4;

struct RunFlags {
  std::string experiment;
  std::string config_file;
  std::string protocol;
  std::optional<double> omega;
  std::optional<double> span;
  std::string omegas;
  std::string grid;
  std::vector<std::string> set;
  std::vector<std::string> option;
  std::vector<std::string> sweep;
  std::string out;
  std::string name;
  bool svg = false;
  std::optional<int> substeps;
  std::optional<double> max_dt;
};

std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::ios_base::failure("cannot read '" + path + "'");
  std::ostringstream os;
  os << f.rdbuf();
  return os.str();
}

double parse_number(const std::string& text, const std::string& field) {
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    throw ConfigError(field, "'" + text + "' is not a number");
  }
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) out.push_back(item);
  return out;
}

std::pair<std::string, std::string> key_value(const std::string& s, const std::string& flag) {
  const auto eq = s.find('=');
  if (eq == std::string::npos || eq == 0) throw ConfigError(flag, "expected name=value, got '" + s + "'");
  return {s.substr(0, eq), s.substr(eq + 1)};
}

bool has_parameter(const ExperimentConfig& c, const std::string& name) {
  for (const auto& p : model_schema(c.model.id)) {
    if (p.name == name) return true;
  }
  return false;
}

// Defaults, then the file, then flags.
ExperimentConfig build_config(const RunFlags& f) {
  ExperimentConfig c;
  nlohmann::json file;
  if (!f.config_file.empty()) file = parse_config_text(read_file(f.config_file));
  std::string experiment = f.experiment;
  if (experiment.empty() && file.is_object() && file.contains("experiment") && file["experiment"].is_string()) {
    experiment = file["experiment"].get<std::string>();
  }
  if (experiment.empty()) throw ConfigError("experiment", "no experiment given");
  c = default_config(experiment);
  if (!file.is_null()) {
    if (file.contains("experiment") && file["experiment"] != experiment) {
      throw ConfigError("experiment", "file says '" + file["experiment"].dump() + "', command line says '" + experiment + "'");
    }
    c = merge_config(c, file);
  }

  if (!f.protocol.empty()) c.protocol = f.protocol;
  if (f.omega) {
    const std::string name = c.model.id == "stirap" ? "omega_sigma" : "omega";
    if (!has_parameter(c, name)) throw ConfigError("--omega", "model '" + c.model.id + "' has no carrier");
    c.model.parameters[name] = *f.omega;
  }
  if (f.span) {
    if (c.model.id != "lz") throw ConfigError("--span", "only the lz model has a symmetric time span");
    if (!(*f.span > 0.0)) throw ConfigError("--span", "must be positive");
    c.model.parameters["t_start"] = -0.5 * *f.span;
    c.model.parameters["t_end"] = 0.5 * *f.span;
  }
  if (!f.omegas.empty()) {
    if (c.experiment != "lz-convergence") throw ConfigError("--omegas", "only lz-convergence takes a carrier list");
    c.omegas.clear();
    for (const auto& s : split(f.omegas, ',')) c.omegas.push_back(parse_number(s, "--omegas"));
  }
  for (const auto& s : f.set) {
    const auto [k, v] = key_value(s, "--set");
    c.model.parameters[k] = parse_number(v, "--set " + k);
  }
  for (const auto& s : f.option) {
    const auto [k, v] = key_value(s, "--option");
    c.model.options[k] = v;
  }
  if (!f.sweep.empty()) {
    c.sweep.clear();
    for (const auto& s : f.sweep) {
      const auto parts = split(s, ':');
      if (parts.size() < 4 || parts.size() > 5) throw ConfigError("--sweep", "expected name:min:max:count[:log], got '" + s + "'");
      AxisSpec a;
      a.parameter = parts[0];
      a.min = parse_number(parts[1], "--sweep " + parts[0]);
      a.max = parse_number(parts[2], "--sweep " + parts[0]);
      a.count = static_cast<int>(parse_number(parts[3], "--sweep " + parts[0]));
      if (parts.size() == 5) {
        if (parts[4] != "log" && parts[4] != "linear") throw ConfigError("--sweep", "scale must be log or linear");
        a.log = parts[4] == "log";
      }
      c.sweep.push_back(a);
    }
  }
  if (!f.grid.empty()) {
    const auto parts = split(f.grid, 'x');
    if (parts.size() != c.sweep.size()) {
      throw ConfigError("--grid", "gives " + std::to_string(parts.size()) + " counts for " +
                                      std::to_string(c.sweep.size()) + " sweep axes");
    }
    for (std::size_t k = 0; k < parts.size(); ++k) c.sweep[k].count = static_cast<int>(parse_number(parts[k], "--grid"));
  }
  if (f.substeps) c.integrator.substeps_per_period = *f.substeps;
  if (f.max_dt) c.integrator.max_dt = *f.max_dt;
  if (!f.out.empty()) c.output.directory = f.out;
  if (!f.name.empty()) c.output.name = f.name;
  if (f.svg) c.output.svg = true;
  return resolve_config(c);
}

ExperimentConfig config_from_file(const std::string& path) {
  RunFlags f;
  f.config_file = path;
  return build_config(f);
}

void install_warning_handler() {
  static std::mutex m;
  static std::set<std::string> seen;
  set_warning_handler([](const std::string& msg) {
    std::lock_guard<std::mutex> lock(m);
    if (seen.insert(msg).second) std::cerr << "warning: " << msg << "\n";
  });
}

int report_failures(const Table& t) {
  for (const auto& f : t.failures) std::cerr << "numerical failure at " << f << "\n";
  return t.failures.empty() ? exit_ok : exit_numerical;
}

int do_run(const RunFlags& flags) {
  const ExperimentConfig c = build_config(flags);
  const Table t = run_experiment(c);
  const auto files = write_outputs(t, to_json(c), config_hash(c), c.output);
  std::cout << files.csv << "\n" << files.meta << "\n";
  if (!files.svg.empty()) std::cout << files.svg << "\n";
  for (const auto& [k, v] : t.summary) std::cout << k << " = " << v << "\n";
  return report_failures(t);
}

int do_compare(const std::string& a_path, const std::string& b_path, const OutputSpec& out) {
  const ExperimentConfig a = config_from_file(a_path);
  const ExperimentConfig b = config_from_file(b_path);
  if (a.model.id != b.model.id) throw ConfigError("model.id", "'" + a.model.id + "' vs '" + b.model.id + "'");
  if (a.sweep.size() != b.sweep.size()) throw ConfigError("sweep", "different number of axes");
  for (std::size_t k = 0; k < a.sweep.size(); ++k) {
    if (a.sweep[k].values() != b.sweep[k].values() || a.sweep[k].parameter != b.sweep[k].parameter) {
      throw ConfigError("sweep[" + std::to_string(k) + "]", "axis mismatch");
    }
  }
  const Table ta = run_experiment(a);
  const Table tb = run_experiment(b);
  Table joined = compare_tables(ta, tb);
  joined.failures = ta.failures;
  joined.failures.insert(joined.failures.end(), tb.failures.begin(), tb.failures.end());
  nlohmann::json resolved{{"a", to_json(a)}, {"b", to_json(b)}};
  const std::string hash = config_hash(a) + config_hash(b);
  const auto files = write_outputs(joined, resolved, hash, out);
  std::cout << files.csv << "\n" << files.meta << "\n";
  std::cout << "geometric_mean_ratio = " << joined.summary.at("geometric_mean_ratio") << "\n";
  return report_failures(joined);
}

int do_list_models() {
  for (const auto& id : model_ids()) {
    ModelSpec spec;
    spec.id = id;
    std::cout << id << " (dim " << resolve_model_spec(spec).dim << ")\n";
    for (const auto& p : model_schema(id)) {
      std::cout << "  " << p.name << " = " << p.default_value << " [" << p.unit << "]  " << p.description << "\n";
    }
    for (const auto& [name, allowed] : model_options(id)) {
      std::cout << "  option " << name << ":";
      for (const auto& a : allowed) std::cout << " " << a;
      std::cout << "\n";
    }
  }
  std::cout << "experiments:";
  for (const auto& e : experiment_names()) std::cout << " " << e;
  std::cout << "\n";
  return exit_ok;
}

int do_validate(const std::string& path) {
  const ExperimentConfig c = config_from_file(path);
  std::cout << to_json(c).dump(2) << "\nconfig_hash = " << config_hash(c) << "\n";
  return exit_ok;
}

}  // namespace

int run_main(int argc, char** argv) {
  install_warning_handler();
  CLI::App app{"Counterdiabatic driving experiment runner"};
  app.require_subcommand(1);

  RunFlags flags;
  auto* run = app.add_subcommand("run", "Run an experiment and write CSV + metadata");
  run->add_option("experiment", flags.experiment, "lz | lz-convergence | stirap | stirap-map | bell | bell-scan | fstirap-gate");
  run->add_option("-c,--config", flags.config_file, "JSON config file");
  run->add_option("--protocol", flags.protocol, "adiabatic | exact_cd | ecd (none/exact/fmod accepted)");
  run->add_option("--omega", flags.omega, "eCD carrier (omega*sigma for stirap)");
  run->add_option("--span", flags.span, "lz time span, centred on the crossing");
  run->add_option("--omegas", flags.omegas, "comma-separated carriers for lz-convergence");
  run->add_option("--grid", flags.grid, "sweep counts, e.g. 40x40");
  run->add_option("--set", flags.set, "model parameter name=value")->take_all();
  run->add_option("--option", flags.option, "model option name=value")->take_all();
  run->add_option("--sweep", flags.sweep, "axis name:min:max:count[:log]")->take_all();
  run->add_option("-o,--out", flags.out, "output directory");
  run->add_option("--name", flags.name, "output base name");
  run->add_flag("--svg", flags.svg, "also write a diagnostic SVG");
  run->add_option("--substeps", flags.substeps, "steps per carrier period");
  run->add_option("--max-dt", flags.max_dt, "upper bound on the time step");

  std::string cmp_a;
  std::string cmp_b;
  OutputSpec cmp_out;
  cmp_out.name = "compare";
  auto* compare = app.add_subcommand("compare", "Run two sweep configs and join their infidelities");
  compare->add_option("config_a", cmp_a, "first config")->required();
  compare->add_option("config_b", cmp_b, "second config")->required();
  compare->add_option("-o,--out", cmp_out.directory, "output directory");
  compare->add_option("--name", cmp_out.name, "output base name");
  compare->add_flag("--svg", cmp_out.svg, "also write a diagnostic SVG");

  auto* list = app.add_subcommand("list-models", "Print models, parameters and experiments");

  std::string validate_path;
  auto* validate = app.add_subcommand("validate-config", "Check a config file and print it resolved");
  validate->add_option("config", validate_path, "config file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? exit_ok : exit_config;
  }

  try {
    if (*run) return do_run(flags);
    if (*compare) return do_compare(cmp_a, cmp_b, cmp_out);
    if (*list) return do_list_models();
    if (*validate) return do_validate(validate_path);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return exit_config;
  } catch (const DomainError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return exit_config;
  } catch (const std::ios_base::failure& e) {
    std::cerr << "I/O error: " << e.what() << "\n";
    return exit_io;
  } catch (const std::exception& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return exit_numerical;
  }
  return exit_config;
}

}  // namespace ecd::lab
