#include <numbers>

#include "ecd/errors.hpp"
#include "ecd/models.hpp"

namespace ecd {

const std::vector<std::string>& model_ids() {
  static const std::vector<std::string> ids{"lz", "stirap", "bell_cqed", "fstirap_gate"};
  return ids;
}

const std::vector<ParameterSchema>& model_schema(const std::string& id) {
  static const std::map<std::string, std::vector<ParameterSchema>> schemas{
      {"lz",
       {{"v", 1.0, "energy/time", "sweep rate of lambda(t) = v t"},
        {"Omega", 1.0, "energy", "coupling on sigma_x"},
        {"t_start", -10.0, "time", "protocol start"},
        {"t_end", 10.0, "time", "protocol end"},
        {"omega", 50.0, "rad/time", "eCD carrier angular frequency"},
        {"phi", 0.0, "rad", "eCD global phase"}}},
      {"stirap",
       {{"Omega_sigma", 20.0, "1", "peak Rabi frequency times sigma"},
        {"d_sigma", 1.0, "1", "pulse delay in units of sigma"},
        {"sigma", 1.0, "time", "width scale (standard deviation sigma/sqrt 2)"},
        {"Delta1", 0.0, "energy", "single-photon detuning"},
        {"omega_sigma", 50.0, "1", "fmod carrier times sigma"},
        {"phi_minus", 0.0, "rad", "pump sideband phase"}}},
      {"bell_cqed",
       {{"g", 1.0, "energy", "qubit-resonator coupling g1 = g2"},
        {"detuning", -10.0, "energy", "qubit-2 detuning Omega_2 - omega_r"},
        {"omega_r", 60.0, "energy", "resonator frequency"},
        {"lambda0", 1.0, "energy", "initial offset Omega_1(0) - Omega_2"},
        {"tau", 10.0, "time", "ramp duration"},
        {"n_ph", 4.0, "1", "photon truncation"},
        {"omega", 1000.0, "rad/time", "eCD carrier (rounded to whole periods in tau)"}}},
      {"fstirap_gate",
       {{"eta", std::numbers::pi / 8.0, "rad", "rotation half-angle"},
        {"chi", 0.0, "rad", "gate phase"},
        {"Delta1", 50.0, "energy", "single-photon detuning"},
        {"Omega0", 200.0, "energy", "peak Rabi frequency"},
        {"width", 1.0, "time", "Gaussian width T of exp(-t^2/T^2)"},
        {"separation", 1.0, "1", "pulse separation in units of width"},
        {"half_window", 6.0, "1", "half window in units of width"},
        {"omega", 0.0, "rad/time", "fmod carrier for the eCD variant (0 = off)"},
        {"max_dt", 2.5e-4, "time", "integration step bound"}}},
  };
  auto it = schemas.find(id);
  if (it == schemas.end()) throw DomainError("unknown model id '" + id + "'");
  return it->second;
}

const std::map<std::string, std::vector<std::string>>& model_options(const std::string& id) {
  static const std::map<std::string, std::map<std::string, std::vector<std::string>>> options{
      {"lz", {{"envelope", {"interpolated", "discrete"}}}},
      {"stirap", {}},
      {"bell_cqed", {{"ramp", {"linear", "local_adiabatic", "boundary_cancel"}}}},
      {"fstirap_gate", {}},
  };
  auto it = options.find(id);
  if (it == options.end()) throw DomainError("unknown model id '" + id + "'");
  return it->second;
}

int model_dim(const ModelSpec& spec) {
  if (spec.id == "lz") return 2;
  if (spec.id == "stirap" || spec.id == "fstirap_gate") return 3;
  if (spec.id == "bell_cqed") {
    auto it = spec.parameters.find("n_ph");
    const double n = it == spec.parameters.end() ? 4.0 : it->second;
    return 4 * static_cast<int>(n);
  }
  throw DomainError("unknown model id '" + spec.id + "'");
}

ModelSpec resolve_model_spec(const ModelSpec& spec) {
  const auto& schema = model_schema(spec.id);
  const auto& opts = model_options(spec.id);
  ModelSpec out;
  out.id = spec.id;
  for (const auto& [name, value] : spec.parameters) {
    bool known = false;
    for (const auto& p : schema) known = known || p.name == name;
    if (!known) throw DomainError("model '" + spec.id + "' has no parameter '" + name + "'");
  }
  for (const auto& p : schema) {
    auto it = spec.parameters.find(p.name);
    out.parameters[p.name] = it == spec.parameters.end() ? p.default_value : it->second;
  }
  for (const auto& [name, value] : spec.options) {
    auto it = opts.find(name);
    if (it == opts.end()) throw DomainError("model '" + spec.id + "' has no option '" + name + "'");
    bool ok = false;
    for (const auto& allowed : it->second) ok = ok || allowed == value;
    if (!ok) throw DomainError("option '" + name + "' of model '" + spec.id + "' cannot be '" + value + "'");
  }
  for (const auto& [name, allowed] : opts) {
    auto it = spec.options.find(name);
    out.options[name] = it == spec.options.end() ? allowed.front() : it->second;
  }
  out.dim = model_dim(out);
  return out;
}

}  // namespace ecd
