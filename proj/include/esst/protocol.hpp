#pragma once

#include <optional>
#include <string>

#include "esst/drive.hpp"
#include "esst/model.hpp"

namespace esst {

enum class ProtocolMode {
  /// L stays in |1>, R makes a half-integer number of Rabi cycles.
  WayOneKeepL,
  /// R stays in |1>, L makes a half-integer number of Rabi cycles.
  WayOneKeepR,
  /// N_L T_L = (N_R + 1/2) T_R: L back in |1>, R in |2>.
  WayTwo,
  /// (N_L + 1/2) T_L = N_R T_R: L in |2>, R back in |1>.
  WayTwoMirrored,
};

std::string to_string(ProtocolMode mode);
ProtocolMode parse_protocol_mode(const std::string& s);

struct ProtocolSolution {
  ProtocolMode mode = ProtocolMode::WayOneKeepL;
  /// Omega21 / Omega_eff (real in the common phase gauge).
  double omega21_over_omega_eff = 0.0;
  /// Way one: number of extra full cycles of the transferring enantiomer.
  int n = 0;
  /// Way two integers after reduction to the earliest equivalent pair.
  int n_l = 0;
  int n_r = 0;
  /// The integers that were asked for.
  int requested_n_l = 0;
  int requested_n_r = 0;
  cplx omega_eff;
  /// L-reference 1-2 coupling that realizes the protocol.
  cplx omega21;
  double transfer_time = 0.0;
  /// P2 of each enantiomer at transfer_time for Lambda1 = Lambda2.
  double predicted_p2_l = 0.0;
  double predicted_p2_r = 0.0;
};

/// Omega21 = -Omega_eff (keep L) or +Omega_eff (keep R); transfer at
/// (n + 1/2) pi / |2 Omega_eff|. Throws std::domain_error for Omega_eff = 0 or
/// n < 0.
ProtocolSolution design_way_one(Chirality keep, cplx omega_eff, int n);

/// Omega21 = (2N_L + 2N_R + 1)/(2N_L - 2N_R - 1) Omega_eff with transfer at
/// N_L T_L. Requires a positive denominator (the Omega21 > Omega_eff > 0
/// branch); otherwise throws std::domain_error("degenerate denominator ...").
/// Pairs sharing a ratio are reduced to the one with the earliest transfer.
ProtocolSolution design_way_two(int n_l, int n_r, cplx omega_eff);

/// Mirrored second way: Omega21 = (2N_L + 2N_R + 1)/(2N_L - 2N_R + 1) Omega_eff,
/// transfer at N_R T_R. Requires N_R >= 1 and N_L >= N_R.
ProtocolSolution design_way_two_mirrored(int n_l, int n_r, cplx omega_eff);

/// Parameters for checking a protocol against the undecimated four-level model.
struct FullModelParams {
  /// Couplings of the three-level legs; omega21 is replaced by the solution's.
  CouplingSet couplings;
  double delta = 0.0;
};

struct FidelityReport {
  double transfer_time = 0.0;
  double p2_l = 0.0;
  double p2_r = 0.0;
  double discrimination = 0.0;
  /// Peak P2 reached by each enantiomer (propagated to half a Rabi period).
  double peak_p2_l = 0.0;
  double peak_p2_r = 0.0;
  /// |O_q|^2 / O~_q^2
  double analytic_peak_l = 0.0;
  double analytic_peak_r = 0.0;

  struct Full {
    double p2_l = 0.0;
    double p2_r = 0.0;
    double discrimination = 0.0;
    /// effective-model discrimination minus full-model discrimination
    double discrimination_drop = 0.0;
    HierarchyDiagnostics hierarchy;
  };
  std::optional<Full> full;
};

/// Simulates both enantiomers from |1> under the two-level model (and
/// optionally the four-level interaction-picture model) up to the transfer
/// time and scores the discrimination |P2^L - P2^R|.
FidelityReport evaluate_protocol(const ProtocolSolution& sol, const EffectiveParams& eff,
                                 const std::optional<FullModelParams>& full = std::nullopt);

/// Amplitude and phase of the 1-2 field that give a target L-reference Omega21,
/// holding the other fields fixed.
struct FieldAdjustment {
  double amplitude12 = 0.0;
  double phase12 = 0.0;
  cplx achieved_omega21;
};

FieldAdjustment adjust_field12(const FieldTriple& fields, const DipoleModel& dip,
                               cplx target_omega21);

/// Rescales the 1-3 amplitude so that Lambda1 = Lambda2, keeping the 2-3 field.
/// Throws std::domain_error when either leg has no coupling at all.
FieldTriple balance_equal_shifts(const FieldTriple& fields, const DipoleModel& dip);

}  // namespace esst
