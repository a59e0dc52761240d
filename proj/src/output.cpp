#include "esst/output.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <stdexcept>
#include <system_error>

namespace esst {

std::string format_number(double v) {
  if (v == 0.0) return "0";  // folds -0 into 0
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

double round_significant(double v) {
  if (!std::isfinite(v)) return v;
  return std::strtod(format_number(v).c_str(), nullptr);
}

std::string population_column(const std::string& label) { return "p" + label; }

std::string trace_csv(const PopulationTrace& trace, CsvStats* stats) {
  CsvStats local;
  std::string out = "t_s";
  for (const auto& label : trace.labels) out += "," + population_column(label);
  out += '\n';
  for (std::size_t i = 0; i < trace.times.size(); ++i) {
    out += format_number(trace.times[i]);
    for (Eigen::Index c = 0; c < trace.populations.cols(); ++c) {
      const double raw = trace.populations(static_cast<Eigen::Index>(i), c);
      const double p = std::clamp(raw, 0.0, 1.0);
      if (p != raw) {
        ++local.clamped;
        local.max_clamp = std::max(local.max_clamp, std::abs(p - raw));
      }
      out += ',';
      out += format_number(p);
    }
    out += '\n';
  }
  if (stats) *stats = local;
  return out;
}

std::string json_text(const nlohmann::ordered_json& j) { return j.dump(2) + "\n"; }

void write_files_atomically(
    const std::vector<std::pair<std::filesystem::path, std::string>>& files) {
  namespace fs = std::filesystem;
  std::vector<fs::path> temps;
  auto cleanup = [&temps] {
    std::error_code ec;
    for (const auto& t : temps) fs::remove(t, ec);
  };
  for (const auto& [path, content] : files) {
    fs::path tmp = path;
    tmp += ".tmp";
    temps.push_back(tmp);
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.close();
    if (!out) {
      cleanup();
      throw std::runtime_error("cannot write " + tmp.string());
    }
  }
  for (std::size_t i = 0; i < files.size(); ++i) {
    std::error_code ec;
    fs::rename(temps[i], files[i].first, ec);
    if (ec) {
      cleanup();
      throw std::runtime_error("cannot move " + temps[i].string() + " into place: " + ec.message());
    }
  }
}

}  // namespace esst
