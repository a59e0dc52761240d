#pragma once

#include <compare>
#include <string>
#include <vector>

namespace esst {

enum class Chirality { L, R };
enum class ChiParity { Even, Odd };
enum class DipoleAxis { X, Y, Z };

std::string to_string(Chirality q);
std::string to_string(DipoleAxis axis);
Chirality parse_chirality(const std::string& s);

/// Vibrational factor |m~>^Q_tau (x) |n~^{+-}>_chi of a working state.
///
/// `m_tilde` is the torsional quantum (the coordinate that carries chirality),
/// `n_tilde` and `chi_parity` label the asymmetric-stretch factor. Only the
/// parity enters the dipole rules; the quantum numbers are bookkeeping.
struct VibrationalLabel {
  int m_tilde = 0;
  int n_tilde = 0;
  ChiParity chi_parity = ChiParity::Even;
  Chirality chirality = Chirality::L;

  void validate() const;
  /// Same state up to chirality.
  bool same_state(const VibrationalLabel& other) const;
  std::string to_string() const;

  friend bool operator==(const VibrationalLabel&, const VibrationalLabel&) = default;
};

/// Whether <a|mu_axis|b> can be nonzero. mu_z is even in chi and connects
/// equal chi-parity; mu_x and mu_y are odd in chi and connect opposite parity.
/// Throws std::domain_error for mixed chirality.
bool dipole_component_allowed(const VibrationalLabel& a, const VibrationalLabel& b,
                              DipoleAxis axis);

/// Sign s with <a|mu_axis|b>_L = s * <a|mu_axis|b>_R: -1 for z, +1 for x and y.
/// Throws std::domain_error when the component is forbidden.
int chirality_sign(const VibrationalLabel& a, const VibrationalLabel& b, DipoleAxis axis);

struct ValidationCheck {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct WorkingSetReport {
  std::vector<ValidationCheck> checks;
  bool all_passed() const;
  std::string failures() const;
};

/// Checks every molecule-frame dipole the four-level loop needs:
/// <v2|mu_z|v1>, <v3|mu_x,y|v2>, <v3|mu_x,y|v1> allowed, and v1 != v2 (a
/// vanishing effective coupling otherwise).
WorkingSetReport validate_working_set(const VibrationalLabel& v1, const VibrationalLabel& v2,
                                      const VibrationalLabel& v3);

}  // namespace esst
