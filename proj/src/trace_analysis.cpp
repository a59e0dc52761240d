#include "esst/trace_analysis.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace esst {

std::vector<Extremum> find_extrema(std::span<const double> times, std::span<const double> values) {
  if (times.size() != values.size()) throw std::domain_error("times and values differ in length");
  std::vector<Extremum> out;
  for (std::size_t i = 1; i + 1 < values.size(); ++i) {
    const double a = values[i - 1], b = values[i], c = values[i + 1];
    const bool is_max = b > a && b >= c;
    const bool is_min = b < a && b <= c;
    if (!is_max && !is_min) continue;
    // Vertex of the parabola through the three samples (non-uniform spacing).
    const double t0 = times[i - 1], t1 = times[i], t2 = times[i + 1];
    const double d0 = (b - a) / (t1 - t0);
    const double d1 = (c - b) / (t2 - t1);
    const double curv = (d1 - d0) / (t2 - t0);
    Extremum e{t1, b, is_max};
    if (curv != 0.0) {
      const double slope_mid = d0 - curv * (t1 - t0);  // derivative at t0 of the parabola
      const double vertex = t0 - slope_mid / (2.0 * curv);
      if (vertex >= t0 && vertex <= t2) {
        e.time = vertex;
        e.value = a + d0 * (vertex - t0) + curv * (vertex - t0) * (vertex - t1);
      }
    }
    out.push_back(e);
  }
  return out;
}

std::optional<double> estimate_period(std::span<const double> times,
                                      std::span<const double> values, double min_swing) {
  if (values.size() < 3) return std::nullopt;
  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  if (*hi - *lo < min_swing) return std::nullopt;

  const std::vector<Extremum> ext = find_extrema(times, values);
  for (const bool want_max : {true, false}) {
    std::vector<double> at;
    for (const auto& e : ext)
      if (e.maximum == want_max) at.push_back(e.time);
    if (at.size() >= 2) return (at.back() - at.front()) / static_cast<double>(at.size() - 1);
  }
  return std::nullopt;
}

}  // namespace esst
