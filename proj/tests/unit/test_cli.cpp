#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <unistd.h>

#include "ecd/lab.hpp"

using namespace ecd;
using namespace ecd::lab;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / ("ecd_lab_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter()++));
    fs::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path, ec);
  }
  static int& counter() {
    static int c = 0;
    return c;
  }
};

int invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "ecd_lab");
  std::vector<char*> argv;
  for (auto& a : args) argv.push_back(a.data());
  return run_main(static_cast<int>(argv.size()), argv.data());
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p);
  std::ostringstream os;
  os << f.rdbuf();
  return os.str();
}

void write(const fs::path& p, const std::string& text) {
  std::ofstream(p) << text;
}

}  // namespace

TEST_CASE("axis values: linear and log, endpoints exact") {
  const AxisSpec lin{"tau", 1.0, 3.0, 5, false};
  CHECK(lin.values() == std::vector<double>{1.0, 1.5, 2.0, 2.5, 3.0});
  const AxisSpec lg{"tau", 1.0, 100.0, 3, true};
  const auto v = lg.values();
  CHECK(v[1] == doctest::Approx(10.0));
  CHECK(v.back() == 100.0);
}

TEST_CASE("config precedence: file over defaults") {
  ExperimentConfig c = default_config("bell-scan");
  CHECK(c.sweep.size() == 1);
  c = merge_config(c, parse_config_text(R"({"protocol": "adiabatic", "model": {"parameters": {"g": 0.5}}})"));
  c = resolve_config(c);
  CHECK(c.protocol == "adiabatic");
  CHECK(c.model.parameters.at("g") == 0.5);
  CHECK(c.model.parameters.at("tau") == 10.0);
  CHECK(c.sweep[0].log);
}

TEST_CASE("config errors name the field or the line") {
  ExperimentConfig c = default_config("stirap");
  try {
    merge_config(c, parse_config_text(R"({"sweep": [{"parameter": "x", "min": 1, "max": 2, "count": "a"}]})"));
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(e.field() == "sweep[0].count");
  }
  try {
    parse_config_text("{\n  \"protocol\": ,\n}");
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("line 2") != std::string::npos);
  }
  c.sweep = {{"nope", 0.0, 1.0, 3, false}};
  CHECK_THROWS_AS(resolve_config(c), ConfigError);
  c.sweep = {{"sigma", 0.0, 1.0, 1, false}};
  CHECK_THROWS_AS(resolve_config(c), ConfigError);
  CHECK_THROWS_AS(merge_config(c, parse_config_text(R"({"colour": 1})")), ConfigError);
  CHECK_THROWS_AS(merge_config(c, parse_config_text(R"({"model": {"id": "lz"}})")), ConfigError);
  c = default_config("stirap");
  c.protocol = "fast";
  CHECK_THROWS_AS(resolve_config(c), ConfigError);
}

TEST_CASE("hash depends on numbers, not on output location") {
  ExperimentConfig a = resolve_config(default_config("lz"));
  ExperimentConfig b = a;
  b.output.directory = "/elsewhere";
  CHECK(config_hash(a) == config_hash(b));
  b.model.parameters["omega"] = 51.0;
  CHECK(config_hash(a) != config_hash(b));
  CHECK(config_hash(a).size() == 16);
}

TEST_CASE("work pool returns results in index order for any worker count") {
  for (const char* threads : {"1", "3"}) {
    ::setenv("ECD_LAB_THREADS", threads, 1);
    CHECK(worker_count() == static_cast<unsigned>(std::atoi(threads)));
    const auto out = parallel_points(50, [](std::size_t i) { return std::vector<double>{static_cast<double>(i * i)}; });
    for (std::size_t i = 0; i < out.size(); ++i) CHECK(out[i][0] == static_cast<double>(i * i));
  }
  ::unsetenv("ECD_LAB_THREADS");
}

TEST_CASE("sweep CSV body is reproducible and independent of thread count") {
  ExperimentConfig c = default_config("stirap-map");
  c.sweep[0].count = 3;
  c.sweep[1].count = 2;
  c = resolve_config(c);
  ::setenv("ECD_LAB_THREADS", "1", 1);
  const std::string one = csv_text(run_experiment(c), to_json(c));
  ::setenv("ECD_LAB_THREADS", "2", 1);
  const std::string two = csv_text(run_experiment(c), to_json(c));
  ::unsetenv("ECD_LAB_THREADS");
  CHECK(one == two);
  std::istringstream lines(one);
  std::string first;
  std::string header;
  std::getline(lines, first);
  std::getline(lines, header);
  CHECK(first.rfind("# config: {", 0) == 0);
  CHECK(header == "Omega_sigma (1),d_sigma (1),infidelity (1),dark_infidelity (1),p1_max (1)");
}

TEST_CASE("compare of identical tables gives ratio one") {
  ExperimentConfig c = default_config("bell-scan");
  c.sweep[0] = {"tau", 2.0, 4.0, 2, false};
  c = resolve_config(c);
  const Table t = run_experiment(c);
  const Table j = compare_tables(t, t);
  for (const auto& row : j.rows) CHECK(row.back() == doctest::Approx(1.0));
  CHECK(j.summary.at("geometric_mean_ratio") == doctest::Approx(1.0));
  Table other = t;
  other.rows[0][0] += 1.0;
  CHECK_THROWS_AS(compare_tables(t, other), ConfigError);
}

TEST_CASE("run writes CSV, metadata and SVG") {
  TempDir dir;
  const std::string d = dir.path.string();
  CHECK(invoke({"run", "lz", "--protocol", "ecd", "--omega", "50", "--span", "20", "-o", d, "--svg"}) == 0);
  const std::string csv = slurp(dir.path / "lz.csv");
  CHECK(csv.find("\"t_start\":-10.0") != std::string::npos);
  CHECK(csv.find("t (time),lambda (energy),p_ground (1)") != std::string::npos);
  const auto meta = nlohmann::json::parse(slurp(dir.path / "lz.meta.json"));
  CHECK(meta["config"]["model"]["parameters"]["omega"] == 50.0);
  CHECK(meta["config_hash"].get<std::string>().size() == 16);
  CHECK(meta.contains("timestamp"));
  CHECK(slurp(dir.path / "lz.svg").find("diagnostic quality") != std::string::npos);

  CHECK(invoke({"run", "lz", "--protocol", "ecd", "--omega", "50", "--span", "20", "-o", d, "--name", "again"}) == 0);
  const std::string again = slurp(dir.path / "again.csv");
  auto body = [](const std::string& s) { return s.substr(s.find('\n')); };
  CHECK(body(csv) == body(again));
}

TEST_CASE("exit codes") {
  TempDir dir;
  const std::string d = dir.path.string();
  CHECK(invoke({"run", "nope", "-o", d}) == 2);
  CHECK(invoke({"run", "stirap", "--set", "foo=1", "-o", d}) == 2);
  CHECK(invoke({"run", "stirap-map", "--grid", "1x3", "-o", d}) == 2);
  CHECK(invoke({"run", "--bogus-flag"}) == 2);
  write(dir.path / "bad.json", "{\"experiment\": \"lz\",\n \"protocol\": 3}");
  CHECK(invoke({"validate-config", (dir.path / "bad.json").string()}) == 2);
  write(dir.path / "good.json", R"({"experiment": "bell-scan", "sweep": [{"parameter": "tau", "min": 2, "max": 3, "count": 2}]})");
  CHECK(invoke({"validate-config", (dir.path / "good.json").string()}) == 0);
  CHECK(invoke({"list-models"}) == 0);
  CHECK(invoke({"run", "lz", "-o", (dir.path / "good.json" / "sub").string()}) == 4);
  CHECK(invoke({"run", "-c", (dir.path / "missing.json").string()}) == 4);

  // lambda = v t overflows partway through the second sweep point.
  CHECK(invoke({"run", "lz", "--protocol", "adiabatic", "--set", "t_start=-1", "--set", "t_end=20", "--sweep",
                "v:1:1e307:2:log", "-o", d, "--name", "overflow"}) == 3);
  const std::string csv = slurp(dir.path / "overflow.csv");
  CHECK(csv.find(",-1,-1\n") != std::string::npos);
  const auto meta = nlohmann::json::parse(slurp(dir.path / "overflow.meta.json"));
  CHECK(meta["failed_points"].size() == 1);
}

TEST_CASE("compare subcommand joins two configs") {
  TempDir dir;
  write(dir.path / "a.json",
        R"({"experiment": "bell-scan", "protocol": "adiabatic", "sweep": [{"parameter": "tau", "min": 2, "max": 4, "count": 2}]})");
  write(dir.path / "b.json",
        R"({"experiment": "bell-scan", "protocol": "ecd", "sweep": [{"parameter": "tau", "min": 2, "max": 4, "count": 2}]})");
  write(dir.path / "c.json",
        R"({"experiment": "bell-scan", "sweep": [{"parameter": "tau", "min": 2, "max": 5, "count": 2}]})");
  const std::string d = dir.path.string();
  CHECK(invoke({"compare", (dir.path / "a.json").string(), (dir.path / "b.json").string(), "-o", d}) == 0);
  const std::string csv = slurp(dir.path / "compare.csv");
  CHECK(csv.find("tau (time),infidelity_a (1),infidelity_b (1),ratio (1)") != std::string::npos);
  CHECK(csv.find("\nsummary,") != std::string::npos);
  CHECK(invoke({"compare", (dir.path / "a.json").string(), (dir.path / "c.json").string(), "-o", d}) == 2);
}
