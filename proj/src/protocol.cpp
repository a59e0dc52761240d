#include "esst/protocol.hpp"

#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>

#include "esst/dynamics.hpp"

namespace esst {

namespace {

void fill_predictions(ProtocolSolution& sol) {
  const EffectiveParams eff{0.0, 0.0, sol.omega_eff, cplx{}, 0.0};
  sol.predicted_p2_l =
      rabi_population(effective_coupling(eff, sol.omega21, Chirality::L), 0.0, sol.transfer_time);
  sol.predicted_p2_r =
      rabi_population(effective_coupling(eff, sol.omega21, Chirality::R), 0.0, sol.transfer_time);
}

void require_coupling(cplx omega_eff) {
  if (omega_eff == cplx{} || !std::isfinite(std::abs(omega_eff))) {
    throw std::domain_error("Omega_eff must be finite and nonzero; no discrimination possible");
  }
}

}  // namespace

std::string to_string(ProtocolMode mode) {
  switch (mode) {
    case ProtocolMode::WayOneKeepL:
      return "way_one_keep_L";
    case ProtocolMode::WayOneKeepR:
      return "way_one_keep_R";
    case ProtocolMode::WayTwo:
      return "way_two";
    case ProtocolMode::WayTwoMirrored:
      return "way_two_mirrored";
  }
  return "?";
}

ProtocolMode parse_protocol_mode(const std::string& s) {
  for (ProtocolMode m : {ProtocolMode::WayOneKeepL, ProtocolMode::WayOneKeepR,
                         ProtocolMode::WayTwo, ProtocolMode::WayTwoMirrored}) {
    if (to_string(m) == s) return m;
  }
  throw std::domain_error("unknown protocol mode '" + s + "'");
}

ProtocolSolution design_way_one(Chirality keep, cplx omega_eff, int n) {
  require_coupling(omega_eff);
  if (n < 0) throw std::domain_error("cycle count n must be a natural number");
  ProtocolSolution sol;
  sol.mode = keep == Chirality::L ? ProtocolMode::WayOneKeepL : ProtocolMode::WayOneKeepR;
  sol.omega21_over_omega_eff = keep == Chirality::L ? -1.0 : 1.0;
  sol.n = n;
  sol.omega_eff = omega_eff;
  sol.omega21 = sol.omega21_over_omega_eff * omega_eff;
  // The moving enantiomer sees |2 Omega_eff|.
  const double period = std::numbers::pi / std::abs(2.0 * omega_eff);
  sol.transfer_time = (n + 0.5) * period;
  fill_predictions(sol);
  return sol;
}

ProtocolSolution design_way_two(int n_l, int n_r, cplx omega_eff) {
  require_coupling(omega_eff);
  if (n_l < 0 || n_r < 0) throw std::domain_error("N_L and N_R must be natural numbers");
  const int num = 2 * n_l + 2 * n_r + 1;
  const int den = 2 * n_l - 2 * n_r - 1;
  if (den <= 0) {
    throw std::domain_error("degenerate denominator: 2 N_L - 2 N_R - 1 = " + std::to_string(den) +
                            " gives Omega21/Omega_eff = " + std::to_string(num) + "/" +
                            std::to_string(den) + ", outside Omega21 > Omega_eff > 0");
  }
  // num and den are odd, so g is odd and divides both N_L and 2 N_R + 1.
  const int g = std::gcd(num, den);
  ProtocolSolution sol;
  sol.mode = ProtocolMode::WayTwo;
  sol.requested_n_l = n_l;
  sol.requested_n_r = n_r;
  sol.n_l = n_l / g;
  sol.n_r = ((2 * n_r + 1) / g - 1) / 2;
  sol.omega21_over_omega_eff = static_cast<double>(num) / den;
  sol.omega_eff = omega_eff;
  sol.omega21 = sol.omega21_over_omega_eff * omega_eff;
  const double period_l = std::numbers::pi / std::abs(omega_eff + sol.omega21);
  sol.transfer_time = sol.n_l * period_l;
  fill_predictions(sol);
  return sol;
}

ProtocolSolution design_way_two_mirrored(int n_l, int n_r, cplx omega_eff) {
  require_coupling(omega_eff);
  if (n_l < 0 || n_r < 0) throw std::domain_error("N_L and N_R must be natural numbers");
  if (n_r < 1 || n_l < n_r) {
    throw std::domain_error("mirrored second way needs N_R >= 1 and N_L >= N_R for "
                            "Omega21 > Omega_eff > 0");
  }
  const int num = 2 * n_l + 2 * n_r + 1;
  const int den = 2 * n_l - 2 * n_r + 1;
  const int g = std::gcd(num, den);
  ProtocolSolution sol;
  sol.mode = ProtocolMode::WayTwoMirrored;
  sol.requested_n_l = n_l;
  sol.requested_n_r = n_r;
  sol.n_l = ((2 * n_l + 1) / g - 1) / 2;
  sol.n_r = n_r / g;
  sol.omega21_over_omega_eff = static_cast<double>(num) / den;
  sol.omega_eff = omega_eff;
  sol.omega21 = sol.omega21_over_omega_eff * omega_eff;
  const double period_r = std::numbers::pi / std::abs(omega_eff - sol.omega21);
  sol.transfer_time = sol.n_r * period_r;
  fill_predictions(sol);
  return sol;
}

FidelityReport evaluate_protocol(const ProtocolSolution& sol, const EffectiveParams& eff,
                                 const std::optional<FullModelParams>& full) {
  FidelityReport rep;
  rep.transfer_time = sol.transfer_time;
  const QuantumState start = QuantumState::basis(two_level_labels(), 0);

  auto run = [&](Chirality q, double& p2, double& peak, double& analytic_peak) {
    const HamiltonianMatrix h = build_two_level(eff, sol.omega21, q);
    p2 = propagate(h, start, sol.transfer_time).populations()(1);
    const cplx oq = effective_coupling(eff, sol.omega21, q);
    const double w = generalized_rabi(oq, eff.lambda_diff());
    analytic_peak = w == 0.0 ? 0.0 : std::norm(oq) / (w * w);
    peak = w == 0.0 ? 0.0 : propagate(h, start, 0.5 * rabi_period(oq, eff.lambda_diff())).populations()(1);
  };
  run(Chirality::L, rep.p2_l, rep.peak_p2_l, rep.analytic_peak_l);
  run(Chirality::R, rep.p2_r, rep.peak_p2_r, rep.analytic_peak_r);
  rep.discrimination = std::abs(rep.p2_l - rep.p2_r);

  if (full) {
    FidelityReport::Full f;
    const Detunings det = Detunings::resonant_pair(full->delta);
    const QuantumState start4 = QuantumState::basis(four_level_labels(), 0);
    CouplingSet cl = full->couplings;
    cl.omega21 = sol.omega21;
    CouplingSet cr = cl;
    cr.omega21 = -sol.omega21;
    f.p2_l = propagate(build_interaction_hamiltonian(cl, det), start4, sol.transfer_time)
                 .populations()(1);
    f.p2_r = propagate(build_interaction_hamiltonian(cr, det), start4, sol.transfer_time)
                 .populations()(1);
    f.discrimination = std::abs(f.p2_l - f.p2_r);
    f.discrimination_drop = rep.discrimination - f.discrimination;
    f.hierarchy = hierarchy_ratio(cl, full->delta);
    rep.full = f;
  }
  return rep;
}

FieldAdjustment adjust_field12(const FieldTriple& fields, const DipoleModel& dip,
                               cplx target_omega21) {
  FieldTriple unit = fields;
  unit.f12.amplitude = 1.0;
  unit.f12.phase = 0.0;
  const cplx base = build_coupling_set(unit, dip, Chirality::L).omega21;
  FieldAdjustment adj;
  if (target_omega21 == cplx{}) return adj;
  if (base == cplx{}) {
    throw std::domain_error("the 1-2 leg has no dipole; Omega21 cannot be tuned");
  }
  const cplx ratio = target_omega21 / base;
  adj.amplitude12 = std::abs(ratio);
  // Omega21 carries exp(-i phase12).
  adj.phase12 = -std::arg(ratio);
  FieldTriple tuned = fields;
  tuned.f12.amplitude = adj.amplitude12;
  tuned.f12.phase = adj.phase12;
  adj.achieved_omega21 = build_coupling_set(tuned, dip, Chirality::L).omega21;
  return adj;
}

FieldTriple balance_equal_shifts(const FieldTriple& fields, const DipoleModel& dip) {
  FieldTriple unit = fields;
  unit.f13.amplitude = 1.0;
  const CouplingSet c = build_coupling_set(unit, dip, Chirality::L);
  const double leg1 = std::norm(c.omega3p1) + std::norm(c.omega3m1);
  const double leg2 = std::norm(c.omega3p2) + std::norm(c.omega3m2);
  if (leg1 == 0.0 || leg2 == 0.0) {
    throw std::domain_error("cannot balance shifts: a three-level leg has zero coupling");
  }
  FieldTriple out = fields;
  out.f13.amplitude = std::sqrt(leg2 / leg1);
  return out;
}

}  // namespace esst
