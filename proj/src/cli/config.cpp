#include <cmath>
#include <cstdint>
#include <cstdio>

#include "ecd/errors.hpp"
#include "ecd/lab.hpp"

namespace ecd::lab {

using nlohmann::json;

ConfigError::ConfigError(const std::string& field, const std::string& message)
    : std::runtime_error(field.empty() ? message : "field '" + field + "': " + message), field_(field) {}

std::vector<double> AxisSpec::values() const {
  std::vector<double> v(static_cast<std::size_t>(count));
  for (int k = 0; k < count; ++k) {
    const double s = count == 1 ? 0.0 : static_cast<double>(k) / (count - 1);
    v[k] = log ? min * std::pow(max / min, s) : min + (max - min) * s;
  }
  if (count > 1) v.back() = max;
  return v;
}

const std::vector<std::string>& experiment_names() {
  static const std::vector<std::string> names{"lz",   "lz-convergence", "stirap",      "stirap-map",
                                              "bell", "bell-scan",      "fstirap-gate"};
  return names;
}

std::string experiment_model(const std::string& experiment) {
  if (experiment == "lz" || experiment == "lz-convergence") return "lz";
  if (experiment == "stirap" || experiment == "stirap-map") return "stirap";
  if (experiment == "bell" || experiment == "bell-scan") return "bell_cqed";
  if (experiment == "fstirap-gate") return "fstirap_gate";
  throw ConfigError("experiment", "unknown experiment '" + experiment + "'");
}

ExperimentConfig default_config(const std::string& experiment) {
  ExperimentConfig c;
  c.experiment = experiment;
  c.model.id = experiment_model(experiment);
  c.model = resolve_model_spec(c.model);
  c.output.name = experiment;
  if (experiment == "lz-convergence") c.omegas = {25.0, 50.0, 100.0, 200.0};
  if (experiment == "stirap-map") {
    c.sweep = {{"Omega_sigma", 1.0, 40.0, 20, false}, {"d_sigma", 0.5, 2.5, 20, false}};
  }
  if (experiment == "bell-scan") c.sweep = {{"tau", 1.0, 30.0, 10, true}};
  if (experiment == "fstirap-gate") c.protocol = "adiabatic";
  return c;
}

namespace {

std::string canonical_protocol(const std::string& p) {
  if (p == "adiabatic" || p == "none") return "adiabatic";
  if (p == "exact_cd" || p == "exact") return "exact_cd";
  if (p == "ecd" || p == "fmod") return "ecd";
  throw ConfigError("protocol", "must be adiabatic | exact_cd | ecd, got '" + p + "'");
}

template <class T>
T get_as(const json& j, const std::string& field) {
  try {
    return j.get<T>();
  } catch (const json::exception&) {
    throw ConfigError(field, "has the wrong type (" + std::string(j.type_name()) + ")");
  }
}

void check_keys(const json& obj, const std::string& where, std::initializer_list<const char*> allowed) {
  if (!obj.is_object()) throw ConfigError(where, "must be an object");
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    bool ok = false;
    for (const char* a : allowed) ok = ok || it.key() == a;
    if (!ok) throw ConfigError(where.empty() ? it.key() : where + "." + it.key(), "unknown key");
  }
}

AxisSpec parse_axis(const json& j, const std::string& where) {
  check_keys(j, where, {"parameter", "min", "max", "count", "scale"});
  AxisSpec a;
  if (!j.contains("parameter")) throw ConfigError(where + ".parameter", "is required");
  a.parameter = get_as<std::string>(j["parameter"], where + ".parameter");
  if (!j.contains("min") || !j.contains("max")) throw ConfigError(where, "needs min and max");
  a.min = get_as<double>(j["min"], where + ".min");
  a.max = get_as<double>(j["max"], where + ".max");
  if (j.contains("count")) a.count = get_as<int>(j["count"], where + ".count");
  if (j.contains("scale")) {
    const auto s = get_as<std::string>(j["scale"], where + ".scale");
    if (s != "linear" && s != "log") throw ConfigError(where + ".scale", "must be linear or log");
    a.log = s == "log";
  }
  return a;
}

}  // namespace

ExperimentConfig merge_config(ExperimentConfig base, const json& tree) {
  check_keys(tree, "", {"experiment", "model", "protocol", "sweep", "omegas", "integrator", "output"});
  if (tree.contains("experiment")) {
    const auto e = get_as<std::string>(tree["experiment"], "experiment");
    if (e != base.experiment) {
      ExperimentConfig fresh = default_config(e);
      fresh.output = base.output.name == base.experiment ? fresh.output : base.output;
      base = fresh;
    }
  }
  if (tree.contains("model")) {
    const json& m = tree["model"];
    check_keys(m, "model", {"id", "parameters", "options"});
    if (m.contains("id")) {
      const auto id = get_as<std::string>(m["id"], "model.id");
      if (id != base.model.id) {
        throw ConfigError("model.id", "'" + id + "' does not match experiment '" + base.experiment + "' (needs '" +
                                          base.model.id + "')");
      }
    }
    if (m.contains("parameters")) {
      if (!m["parameters"].is_object()) throw ConfigError("model.parameters", "must be an object");
      for (auto it = m["parameters"].begin(); it != m["parameters"].end(); ++it) {
        base.model.parameters[it.key()] = get_as<double>(it.value(), "model.parameters." + it.key());
      }
    }
    if (m.contains("options")) {
      if (!m["options"].is_object()) throw ConfigError("model.options", "must be an object");
      for (auto it = m["options"].begin(); it != m["options"].end(); ++it) {
        base.model.options[it.key()] = get_as<std::string>(it.value(), "model.options." + it.key());
      }
    }
  }
  if (tree.contains("protocol")) base.protocol = get_as<std::string>(tree["protocol"], "protocol");
  if (tree.contains("sweep")) {
    if (!tree["sweep"].is_array()) throw ConfigError("sweep", "must be an array of axes");
    base.sweep.clear();
    for (std::size_t k = 0; k < tree["sweep"].size(); ++k) {
      base.sweep.push_back(parse_axis(tree["sweep"][k], "sweep[" + std::to_string(k) + "]"));
    }
  }
  if (tree.contains("omegas")) base.omegas = get_as<std::vector<double>>(tree["omegas"], "omegas");
  if (tree.contains("integrator")) {
    const json& i = tree["integrator"];
    check_keys(i, "integrator", {"substeps_per_period", "min_steps", "max_dt"});
    if (i.contains("substeps_per_period")) {
      base.integrator.substeps_per_period = get_as<int>(i["substeps_per_period"], "integrator.substeps_per_period");
    }
    if (i.contains("min_steps")) base.integrator.min_steps = get_as<int>(i["min_steps"], "integrator.min_steps");
    if (i.contains("max_dt")) base.integrator.max_dt = get_as<double>(i["max_dt"], "integrator.max_dt");
  }
  if (tree.contains("output")) {
    const json& o = tree["output"];
    check_keys(o, "output", {"directory", "name", "svg"});
    if (o.contains("directory")) base.output.directory = get_as<std::string>(o["directory"], "output.directory");
    if (o.contains("name")) base.output.name = get_as<std::string>(o["name"], "output.name");
    if (o.contains("svg")) base.output.svg = get_as<bool>(o["svg"], "output.svg");
  }
  return base;
}

json parse_config_text(const std::string& text) {
  try {
    return json::parse(text, nullptr, true, true);
  } catch (const json::parse_error& e) {
    std::size_t line = 1;
    std::size_t col = 1;
    const std::size_t end = std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, text.size());
    for (std::size_t k = 0; k < end; ++k) {
      if (text[k] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw ConfigError("", "syntax error at line " + std::to_string(line) + ", column " + std::to_string(col) + ": " +
                              e.what());
  }
}

ExperimentConfig resolve_config(ExperimentConfig c) {
  experiment_model(c.experiment);
  try {
    c.model = resolve_model_spec(c.model);
  } catch (const DomainError& e) {
    throw ConfigError("model", e.what());
  }
  c.protocol = canonical_protocol(c.protocol);
  const auto& schema = model_schema(c.model.id);
  for (std::size_t k = 0; k < c.sweep.size(); ++k) {
    const AxisSpec& a = c.sweep[k];
    const std::string where = "sweep[" + std::to_string(k) + "]";
    bool known = false;
    for (const auto& p : schema) known = known || p.name == a.parameter;
    if (!known) throw ConfigError(where + ".parameter", "model '" + c.model.id + "' has no parameter '" + a.parameter + "'");
    if (a.count < 2) throw ConfigError(where + ".count", "must be >= 2");
    if (!std::isfinite(a.min) || !std::isfinite(a.max)) throw ConfigError(where, "bounds must be finite");
    if (a.log && !(a.min > 0.0 && a.max > 0.0)) throw ConfigError(where, "log axes need positive bounds");
    for (std::size_t j = 0; j < k; ++j) {
      if (c.sweep[j].parameter == a.parameter) throw ConfigError(where + ".parameter", "axis repeated");
    }
  }
  if (c.sweep.size() > 2) throw ConfigError("sweep", "at most two axes");
  if (c.experiment == "lz-convergence") {
    if (!c.sweep.empty()) throw ConfigError("sweep", "lz-convergence scans 'omegas' instead");
    if (c.omegas.size() < 2) throw ConfigError("omegas", "need at least two carriers");
    for (double w : c.omegas) {
      if (!(w > 0.0)) throw ConfigError("omegas", "carriers must be positive");
    }
    c.protocol = "ecd";
  }
  if (c.model.id == "fstirap_gate") {
    if (c.protocol == "exact_cd") throw ConfigError("protocol", "fstirap-gate supports adiabatic | ecd");
    if (c.protocol == "ecd" && !(c.model.parameters.at("omega") > 0.0)) {
      throw ConfigError("model.parameters.omega", "ecd needs a positive carrier");
    }
  }
  if (c.integrator.substeps_per_period && *c.integrator.substeps_per_period < 1) {
    throw ConfigError("integrator.substeps_per_period", "must be >= 1");
  }
  if (c.integrator.min_steps && *c.integrator.min_steps < 1) throw ConfigError("integrator.min_steps", "must be >= 1");
  if (c.integrator.max_dt && !(*c.integrator.max_dt > 0.0)) throw ConfigError("integrator.max_dt", "must be > 0");
  if (c.output.name.empty()) c.output.name = c.experiment;
  if (c.output.name.find('/') != std::string::npos) throw ConfigError("output.name", "must not contain '/'");
  return c;
}

json to_json(const ExperimentConfig& c) {
  json j;
  j["experiment"] = c.experiment;
  j["model"]["id"] = c.model.id;
  j["model"]["parameters"] = c.model.parameters;
  j["model"]["options"] = c.model.options.empty() ? json::object() : json(c.model.options);
  j["protocol"] = c.protocol;
  j["sweep"] = json::array();
  for (const auto& a : c.sweep) {
    j["sweep"].push_back(
        {{"parameter", a.parameter}, {"min", a.min}, {"max", a.max}, {"count", a.count}, {"scale", a.log ? "log" : "linear"}});
  }
  j["omegas"] = c.omegas;
  json integ = json::object();
  if (c.integrator.substeps_per_period) integ["substeps_per_period"] = *c.integrator.substeps_per_period;
  if (c.integrator.min_steps) integ["min_steps"] = *c.integrator.min_steps;
  if (c.integrator.max_dt) integ["max_dt"] = *c.integrator.max_dt;
  j["integrator"] = integ;
  j["output"] = {{"directory", c.output.directory}, {"name", c.output.name}, {"svg", c.output.svg}};
  return j;
}

std::string config_hash(const ExperimentConfig& c) {
  json j = to_json(c);
  // Output location does not change the numbers.
  j.erase("output");
  const std::string s = j.dump();
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char ch : s) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace ecd::lab
