#pragma once

#include <span>
#include <vector>

#include "esst/drive.hpp"

namespace esst {

/// Four-level versus two-level discrepancy at one detuning.
struct EliminationPoint {
  double delta = 0.0;
  /// Transfer period of the R enantiomer in the two-level model.
  double period_r = 0.0;
  /// max over t in [0, 2 T_R] of |P2(four-level) - P2(two-level)|, per enantiomer.
  double error_l = 0.0;
  double error_r = 0.0;
  double r1 = 0.0;

  double error() const { return error_l > error_r ? error_l : error_r; }
};

struct EliminationScan {
  std::vector<EliminationPoint> points;
  /// error(k) / error(k + 1) for consecutive ladder entries.
  std::vector<double> ratios;
};

/// Compares the interaction-picture four-level model with the eliminated
/// two-level model at each detuning, holding every coupling fixed. Ladder
/// entries are evaluated in parallel.
EliminationScan elimination_error_scan(const CouplingSet& couplings, std::span<const double> deltas,
                                       std::size_t grid_points = 2001);

/// Serial reference of elimination_error_scan.
EliminationScan elimination_error_scan_serial(const CouplingSet& couplings,
                                              std::span<const double> deltas,
                                              std::size_t grid_points = 2001);

}  // namespace esst
