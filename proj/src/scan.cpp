#include "esst/scan.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "esst/dynamics.hpp"
#include "esst/model.hpp"

namespace esst {

namespace {

// Nested inside the ladder loop, propagate_trace runs on the calling thread.
EliminationPoint scan_point(const CouplingSet& couplings, double delta, std::size_t grid_points) {
  EliminationPoint p;
  p.delta = delta;
  const EffectiveParams eff = adiabatic_eliminate(couplings, delta);
  p.period_r = rabi_period(effective_coupling(eff, couplings.omega21, Chirality::R),
                           eff.lambda_diff());
  if (!std::isfinite(p.period_r)) {
    throw std::domain_error("R enantiomer does not oscillate; no time window for the scan");
  }
  p.r1 = hierarchy_ratio(couplings, delta).r1;
  const std::vector<double> grid = uniform_grid(0.0, 2.0 * p.period_r, grid_points);

  for (Chirality q : {Chirality::L, Chirality::R}) {
    CouplingSet cq = couplings;
    if (q == Chirality::R) cq.omega21 = -cq.omega21;
    const auto full = propagate_trace(build_interaction_hamiltonian(cq, Detunings::resonant_pair(delta)),
                            QuantumState::basis(four_level_labels(), 0), grid, to_string(q));
    const auto two = propagate_trace(build_two_level(eff, couplings.omega21, q),
                           QuantumState::basis(two_level_labels(), 0), grid, to_string(q));
    double worst = 0.0;
    for (Eigen::Index i = 0; i < full.populations.rows(); ++i) {
      worst = std::max(worst, std::abs(full.populations(i, 1) - two.populations(i, 1)));
    }
    (q == Chirality::L ? p.error_l : p.error_r) = worst;
  }
  return p;
}

void fill_ratios(EliminationScan& scan) {
  for (std::size_t k = 0; k + 1 < scan.points.size(); ++k) {
    scan.ratios.push_back(scan.points[k].error() / scan.points[k + 1].error());
  }
}

}  // namespace

EliminationScan elimination_error_scan(const CouplingSet& couplings, std::span<const double> deltas,
                                       std::size_t grid_points) {
  EliminationScan scan;
  scan.points.resize(deltas.size());
  const auto n = static_cast<std::ptrdiff_t>(deltas.size());
  // Exceptions may not leave an OpenMP region; collect and rethrow.
  std::vector<std::exception_ptr> errors(deltas.size());

#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t k = 0; k < n; ++k) {
    const auto i = static_cast<std::size_t>(k);
    try {
      scan.points[i] = scan_point(couplings, deltas[i], grid_points);
    } catch (...) {
      errors[i] = std::current_exception();
    }
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
  fill_ratios(scan);
  return scan;
}

EliminationScan elimination_error_scan_serial(const CouplingSet& couplings,
                                              std::span<const double> deltas,
                                              std::size_t grid_points) {
  EliminationScan scan;
  for (double d : deltas) scan.points.push_back(scan_point(couplings, d, grid_points));
  fill_ratios(scan);
  return scan;
}

}  // namespace esst
