#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "esst/drive.hpp"

namespace esst {

/// Bare level frequencies of |1>, |2> and the degenerate pair |3+->, rad/s.
struct LevelFrequencies {
  double omega1 = 0.0;
  double omega2 = 0.0;
  double omega3 = 0.0;

  /// Throws std::domain_error unless omega1 < omega2 < omega3.
  void validate() const;
};

/// Carrier frequencies of the three fields, rad/s.
struct CarrierFrequencies {
  double omega12 = 0.0;
  double omega23 = 0.0;
  double omega13 = 0.0;
};

/// Detunings Delta_lj = (omega_j - omega_l) - omega_lj. Construction enforces
/// three-photon resonance, Delta13 = Delta12 + Delta23.
class Detunings {
 public:
  /// Throws std::domain_error when the resonance identity fails beyond 1e-9
  /// relative to the largest magnitude.
  Detunings(double delta12, double delta13, double delta23);

  static Detunings from_frequencies(const LevelFrequencies& levels,
                                    const CarrierFrequencies& carriers);
  /// Delta12 = 0, Delta13 = Delta23 = delta.
  static Detunings resonant_pair(double delta) { return {0.0, delta, delta}; }

  double delta12() const { return d12_; }
  double delta13() const { return d13_; }
  double delta23() const { return d23_; }
  /// The shared detuning of the 2-3 and 1-3 fields.
  double delta() const { return d13_; }

 private:
  double d12_;
  double d13_;
  double d23_;
};

/// Dense Hermitian operator with basis labels, entries in rad/s.
struct HamiltonianMatrix {
  Eigen::MatrixXcd h;
  std::vector<std::string> labels;

  Eigen::Index dimension() const { return h.rows(); }
  /// Largest |H - H^dagger| entry relative to the largest |H| entry.
  double hermiticity_residual() const;
};

/// Basis labels used for the four- and two-level models.
const std::vector<std::string>& four_level_labels();
const std::vector<std::string>& two_level_labels();

/// Parameters produced by eliminating |3+> and |3->.
struct EffectiveParams {
  double lambda1 = 0.0;
  double lambda2 = 0.0;
  cplx omega_eff;
  cplx omega_eff_prime;
  /// (lambda1 + lambda2) / 2, dropped from the two-level Hamiltonian.
  double common_shift = 0.0;

  double lambda_diff() const { return lambda1 - lambda2; }
};

/// Lab-frame four-level Hamiltonian at time t, basis (1, 2, 3+, 3-).
HamiltonianMatrix build_lab_hamiltonian(const LevelFrequencies& freqs, const CouplingSet& c,
                                        const CarrierFrequencies& carriers, double t);

/// Time-independent interaction-picture Hamiltonian, diagonal
/// (0, Delta12, Delta13, Delta13).
HamiltonianMatrix build_interaction_hamiltonian(const CouplingSet& c, const Detunings& det);

/// Second-order elimination of the far-detuned pair (closed form):
///   Lambda1 = -(|O3+1|^2 + |O3-1|^2)/Delta, Lambda2 = -(|O3+2|^2 + |O3-2|^2)/Delta,
///   Oeff = -(O3+1 O3+2* + O3-1 O3-2*)/Delta, Oeff' = (O3+1* O3-1 + O3+2* O3-2)/Delta.
/// Throws std::domain_error for Delta = 0.
EffectiveParams adiabatic_eliminate(const CouplingSet& c, double delta);

/// As above, rejecting configurations with Delta12 != 0.
EffectiveParams adiabatic_eliminate(const CouplingSet& c, const Detunings& det);

struct HierarchyDiagnostics {
  /// max |O3+-.| / |Delta|
  double r1 = 0.0;
  /// |O21| / min |O3+-.|
  double r2 = 0.0;
  bool large_detuning(double threshold = 0.1) const { return r1 < threshold && r2 < 1.0; }
};

HierarchyDiagnostics hierarchy_ratio(const CouplingSet& c, double delta);

/// Two-level Hamiltonian for enantiomer q in basis (1, 2):
///   (Lambda1 - Lambda2)/2 (|1><1| - |2><2|) + (O_q |2><1| + h.c.),
/// with O_L = Oeff + O21 and O_R = Oeff - O21. `omega21` is the L reference.
HamiltonianMatrix build_two_level(const EffectiveParams& eff, cplx omega21, Chirality q);

/// Chirality-resolved effective coupling O_q.
cplx effective_coupling(const EffectiveParams& eff, cplx omega21, Chirality q);

/// The full four-level effective Hamiltonian after elimination (including the
/// Lambda shifts and the 3+ <-> 3- coupling) in basis (1, 2, 3+, 3-).
HamiltonianMatrix build_effective_four_level(const EffectiveParams& eff, cplx omega21_q,
                                             double delta);

}  // namespace esst
