#pragma once

#include <optional>
#include <span>
#include <vector>

namespace esst {

struct Extremum {
  double time = 0.0;
  double value = 0.0;
  bool maximum = true;
};

/// Interior local extrema of a sampled curve, refined by a parabola through
/// the three samples around each one.
std::vector<Extremum> find_extrema(std::span<const double> times, std::span<const double> values);

/// Oscillation period as the mean spacing of successive maxima (falling back
/// to minima). Empty when the curve swings by less than `min_swing` or fewer
/// than two extrema of one kind are found.
std::optional<double> estimate_period(std::span<const double> times,
                                      std::span<const double> values, double min_swing = 1e-6);

}  // namespace esst
