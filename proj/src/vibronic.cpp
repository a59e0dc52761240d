#include "esst/vibronic.hpp"

#include <stdexcept>

namespace esst {

std::string to_string(Chirality q) { return q == Chirality::L ? "L" : "R"; }

std::string to_string(DipoleAxis axis) {
  switch (axis) {
    case DipoleAxis::X:
      return "x";
    case DipoleAxis::Y:
      return "y";
    case DipoleAxis::Z:
      return "z";
  }
  return "?";
}

Chirality parse_chirality(const std::string& s) {
  if (s == "L") return Chirality::L;
  if (s == "R") return Chirality::R;
  throw std::domain_error("chirality must be L or R, got '" + s + "'");
}

void VibrationalLabel::validate() const {
  if (m_tilde < 0 || n_tilde < 0) {
    throw std::domain_error("vibrational quanta must be non-negative: " + to_string());
  }
}

bool VibrationalLabel::same_state(const VibrationalLabel& other) const {
  return m_tilde == other.m_tilde && n_tilde == other.n_tilde && chi_parity == other.chi_parity;
}

std::string VibrationalLabel::to_string() const {
  return "(" + std::to_string(m_tilde) + "," + std::to_string(n_tilde) +
         (chi_parity == ChiParity::Even ? "+" : "-") + "," + esst::to_string(chirality) + ")";
}

bool dipole_component_allowed(const VibrationalLabel& a, const VibrationalLabel& b,
                              DipoleAxis axis) {
  a.validate();
  b.validate();
  if (a.chirality != b.chirality) {
    throw std::domain_error("transition dipoles connect states of one enantiomer only");
  }
  const bool same_parity = a.chi_parity == b.chi_parity;
  return axis == DipoleAxis::Z ? same_parity : !same_parity;
}

int chirality_sign(const VibrationalLabel& a, const VibrationalLabel& b, DipoleAxis axis) {
  if (!dipole_component_allowed(a, b, axis)) {
    throw std::domain_error("chirality sign requested for forbidden component mu_" +
                            to_string(axis) + " between " + a.to_string() + " and " +
                            b.to_string());
  }
  // mu_z is odd under the tau -> 2pi - tau mirror, mu_x and mu_y are even.
  return axis == DipoleAxis::Z ? -1 : +1;
}

bool WorkingSetReport::all_passed() const {
  for (const auto& c : checks)
    if (!c.passed) return false;
  return true;
}

std::string WorkingSetReport::failures() const {
  std::string out;
  for (const auto& c : checks) {
    if (c.passed) continue;
    if (!out.empty()) out += "; ";
    out += c.name + " (" + c.detail + ")";
  }
  return out;
}

WorkingSetReport validate_working_set(const VibrationalLabel& v1, const VibrationalLabel& v2,
                                      const VibrationalLabel& v3) {
  if (v1.chirality != v2.chirality || v1.chirality != v3.chirality) {
    throw std::domain_error("working set mixes enantiomers");
  }
  WorkingSetReport report;
  auto leg = [&](const char* name, const VibrationalLabel& upper, const VibrationalLabel& lower,
                 DipoleAxis axis) {
    const bool ok = dipole_component_allowed(upper, lower, axis);
    report.checks.push_back({name, ok,
                             ok ? "allowed"
                                : "forbidden by chi parity: " + upper.to_string() + " vs " +
                                      lower.to_string()});
  };
  leg("v2_v1_z", v2, v1, DipoleAxis::Z);
  leg("v3_v2_x", v3, v2, DipoleAxis::X);
  leg("v3_v2_y", v3, v2, DipoleAxis::Y);
  leg("v3_v1_x", v3, v1, DipoleAxis::X);
  leg("v3_v1_y", v3, v1, DipoleAxis::Y);
  const bool distinct = !v1.same_state(v2);
  report.checks.push_back({"v1_ne_v2", distinct,
                           distinct ? "distinct" : "v1 == v2 makes the effective coupling vanish"});
  return report;
}

}  // namespace esst
