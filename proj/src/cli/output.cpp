#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "ecd/lab.hpp"

namespace ecd::lab {

namespace {

std::string number(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::ios_base::failure("cannot open '" + path.string() + "' for writing");
  f << text;
  f.close();
  if (!f) throw std::ios_base::failure("write to '" + path.string() + "' failed");
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '<') out += "&lt;";
    else if (c == '>') out += "&gt;";
    else if (c == '&') out += "&amp;";
    else out += c;
  }
  return out;
}

// Log scale when every positive value spans more than two decades.
bool wants_log(const std::vector<double>& v) {
  double lo = INFINITY;
  double hi = 0.0;
  for (double x : v) {
    if (x > 0.0) {
      lo = std::min(lo, x);
      hi = std::max(hi, x);
    }
  }
  return hi > 0.0 && hi / lo > 100.0;
}

std::string heat_colour(double s) {
  s = std::clamp(s, 0.0, 1.0);
  const int r = static_cast<int>(255 * s);
  const int b = static_cast<int>(255 * (1.0 - s));
  char buf[16];
  std::snprintf(buf, sizeof buf, "#%02x40%02x", r, b);
  return buf;
}

}  // namespace

std::string csv_text(const Table& table, const nlohmann::json& resolved) {
  std::ostringstream os;
  os << "# config: " << resolved.dump() << "\n";
  for (std::size_t k = 0; k < table.columns.size(); ++k) os << (k ? "," : "") << table.columns[k];
  os << "\n";
  for (const auto& row : table.rows) {
    for (std::size_t k = 0; k < row.size(); ++k) os << (k ? "," : "") << number(row[k]);
    os << "\n";
  }
  if (table.metric == "ratio" && table.summary.count("geometric_mean_ratio")) {
    os << "summary";
    for (std::size_t k = 1; k + 1 < table.columns.size(); ++k) os << ",";
    os << "," << number(table.summary.at("geometric_mean_ratio")) << "\n";
  }
  return os.str();
}

std::string svg_text(const Table& table, const std::string& title) {
  constexpr double width = 640.0;
  constexpr double height = 420.0;
  constexpr double left = 70.0;
  constexpr double top = 40.0;
  constexpr double plot_w = 520.0;
  constexpr double plot_h = 320.0;
  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height << "\">\n";
  os << "<text x=\"10\" y=\"20\" font-size=\"13\">" << escape(title) << " (diagnostic quality)</text>\n";
  if (table.rows.empty() || table.columns.size() < 2) return os.str() + "</svg>\n";

  const std::size_t metric = table.axes > 0 ? static_cast<std::size_t>(table.axes) : 2;
  const std::size_t ycol = std::min(metric, table.columns.size() - 1);
  std::vector<double> ys;
  for (const auto& r : table.rows) ys.push_back(r[ycol]);
  const bool logy = wants_log(ys);
  auto transform = [&](double y) { return logy ? std::log10(std::max(y, 1e-300)) : y; };
  double ylo = INFINITY;
  double yhi = -INFINITY;
  for (double y : ys) {
    if (y == failed_point || (logy && y <= 0.0)) continue;
    ylo = std::min(ylo, transform(y));
    yhi = std::max(yhi, transform(y));
  }
  if (!(yhi > ylo)) yhi = ylo + 1.0;

  if (table.axes == 2) {
    std::vector<double> xs;
    std::vector<double> zs;
    for (const auto& r : table.rows) {
      if (std::find(xs.begin(), xs.end(), r[0]) == xs.end()) xs.push_back(r[0]);
      if (std::find(zs.begin(), zs.end(), r[1]) == zs.end()) zs.push_back(r[1]);
    }
    const double cw = plot_w / xs.size();
    const double ch = plot_h / zs.size();
    for (const auto& r : table.rows) {
      const auto i = std::find(xs.begin(), xs.end(), r[0]) - xs.begin();
      const auto j = std::find(zs.begin(), zs.end(), r[1]) - zs.begin();
      const double v = r[ycol];
      const std::string fill = v == failed_point ? "#808080" : heat_colour((transform(std::max(v, 1e-300)) - ylo) / (yhi - ylo));
      os << "<rect x=\"" << left + i * cw << "\" y=\"" << top + plot_h - (j + 1) * ch << "\" width=\"" << cw
         << "\" height=\"" << ch << "\" fill=\"" << fill << "\"/>\n";
    }
    os << "<text x=\"" << left << "\" y=\"" << height - 15 << "\" font-size=\"12\">x: " << escape(table.columns[0])
       << ", y: " << escape(table.columns[1]) << ", colour: " << (logy ? "log10 " : "") << escape(table.columns[ycol])
       << " [" << ylo << ", " << yhi << "]</text>\n";
    return os.str() + "</svg>\n";
  }

  double xlo = table.rows.front()[0];
  double xhi = table.rows.back()[0];
  if (!(xhi > xlo)) xhi = xlo + 1.0;
  os << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << plot_w << "\" height=\"" << plot_h
     << "\" fill=\"none\" stroke=\"black\"/>\n<polyline fill=\"none\" stroke=\"#1f4fbf\" points=\"";
  for (const auto& r : table.rows) {
    const double y = r[ycol];
    if (y == failed_point || (logy && y <= 0.0)) continue;
    os << left + (r[0] - xlo) / (xhi - xlo) * plot_w << "," << top + plot_h - (transform(y) - ylo) / (yhi - ylo) * plot_h
       << " ";
  }
  os << "\"/>\n";
  os << "<text x=\"" << left << "\" y=\"" << height - 15 << "\" font-size=\"12\">x: " << escape(table.columns[0])
     << " [" << xlo << ", " << xhi << "], y: " << (logy ? "log10 " : "") << escape(table.columns[ycol]) << " [" << ylo
     << ", " << yhi << "]</text>\n";
  return os.str() + "</svg>\n";
}

WrittenFiles write_outputs(const Table& table, const nlohmann::json& resolved, const std::string& hash,
                           const OutputSpec& output) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(output.directory, ec);
  if (ec) throw std::ios_base::failure("cannot create '" + output.directory + "': " + ec.message());
  const fs::path base = fs::path(output.directory) / output.name;
  WrittenFiles files;
  files.csv = base.string() + ".csv";
  files.meta = base.string() + ".meta.json";
  write_file(files.csv, csv_text(table, resolved));

  nlohmann::json meta;
  meta["config"] = resolved;
  meta["config_hash"] = hash;
  meta["timestamp"] = timestamp();
  meta["columns"] = table.columns;
  meta["rows"] = table.rows.size();
  meta["failed_points"] = table.failures;
  nlohmann::json summary = nlohmann::json::object();
  for (const auto& [k, v] : table.summary) summary[k] = v;
  meta["summary"] = summary;
  write_file(files.meta, meta.dump(2) + "\n");

  if (output.svg) {
    files.svg = base.string() + ".svg";
    write_file(files.svg, svg_text(table, output.name));
  }
  return files;
}

}  // namespace ecd::lab
