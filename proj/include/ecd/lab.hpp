#pragma once

#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "ecd/models.hpp"

namespace ecd::lab {

/// Invalid configuration; field names the offending entry ("sweep[0].count").
class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& field, const std::string& message);
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

struct AxisSpec {
  std::string parameter;
  double min = 0.0;
  double max = 0.0;
  int count = 2;
  bool log = false;
  std::vector<double> values() const;
};

struct IntegratorSpec {
  std::optional<int> substeps_per_period;
  std::optional<int> min_steps;
  std::optional<double> max_dt;
};

struct OutputSpec {
  std::string directory = ".";
  std::string name;
  bool svg = false;
};

struct ExperimentConfig {
  /// lz | lz-convergence | stirap | stirap-map | bell | bell-scan | fstirap-gate
  std::string experiment;
  ModelSpec model;
  /// adiabatic | exact_cd | ecd
  std::string protocol = "ecd";
  std::vector<AxisSpec> sweep;
  /// Carrier list of lz-convergence.
  std::vector<double> omegas;
  IntegratorSpec integrator;
  OutputSpec output;
};

const std::vector<std::string>& experiment_names();
std::string experiment_model(const std::string& experiment);

/// Defaults of an experiment with every model parameter expanded.
ExperimentConfig default_config(const std::string& experiment);

/// Overlays a JSON tree on `base`; unknown keys and bad values raise ConfigError.
ExperimentConfig merge_config(ExperimentConfig base, const nlohmann::json& tree);

/// Parses config text; syntax errors report line and column.
nlohmann::json parse_config_text(const std::string& text);

/// Fills defaults and checks every invariant.
ExperimentConfig resolve_config(ExperimentConfig config);

nlohmann::json to_json(const ExperimentConfig& config);

/// FNV-1a 64-bit hash of the compact JSON dump, as 16 hex digits.
std::string config_hash(const ExperimentConfig& config);

/// Rectangular numeric result. Sweep results keep axis columns first.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
  /// Number of leading axis columns (0 for time series).
  int axes = 0;
  /// Column holding the figure of merit compared by `compare`.
  std::string metric = "infidelity";
  /// One entry per failed sweep point.
  std::vector<std::string> failures;
  /// Scalar results of single runs (end-of-protocol metrics).
  std::map<std::string, double> summary;
  std::size_t column(const std::string& name) const;
};

/// Value written for points whose computation failed.
constexpr double failed_point = -1.0;

Table run_experiment(const ExperimentConfig& config);

/// Worker count from ECD_LAB_THREADS, else hardware concurrency.
unsigned worker_count();

/// Evaluates f(0..n-1) on a work pool; results are returned in index order.
std::vector<std::vector<double>> parallel_points(std::size_t n,
                                                 const std::function<std::vector<double>(std::size_t)>& f);

/// Joins two sweep tables on their axes; throws ConfigError on mismatch.
Table compare_tables(const Table& a, const Table& b);

struct WrittenFiles {
  std::string csv;
  std::string meta;
  std::string svg;
};

/// Writes <dir>/<name>.csv, .meta.json and optionally .svg. Throws std::ios_base::failure.
WrittenFiles write_outputs(const Table& table, const nlohmann::json& resolved, const std::string& hash,
                           const OutputSpec& output);

std::string csv_text(const Table& table, const nlohmann::json& resolved);
std::string svg_text(const Table& table, const std::string& title);

/// Entry point of the ecd_lab tool. Returns the process exit code.
int run_main(int argc, char** argv);

}  // namespace ecd::lab
