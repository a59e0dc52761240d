#include "esst/drive.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "esst/angular.hpp"

namespace esst {

namespace {

constexpr cplx kI{0.0, 1.0};

cplx phase_factor(double phase) { return std::polar(1.0, -phase); }

}  // namespace

void DriveField::validate() const {
  if (sigma < -1 || sigma > 1) throw std::domain_error("field helicity must be -1, 0 or +1");
  if (!(amplitude >= 0.0) || !std::isfinite(amplitude)) {
    throw std::domain_error("field amplitude must be finite and non-negative");
  }
  if (!std::isfinite(omega) || !std::isfinite(phase)) {
    throw std::domain_error("field frequency and phase must be finite");
  }
}

void FieldTriple::validate() const {
  f12.validate();
  f23.validate();
  f13.validate();
  if (f12.sigma != -1 || f23.sigma != +1 || f13.sigma != 0) {
    throw std::domain_error("field helicities must be sigma = -1 (1-2), +1 (2-3), 0 (1-3)");
  }
}

DipoleModel::DipoleModel(std::array<VibrationalLabel, 3> labels) : labels_(labels) {
  for (auto& l : labels_) {
    l.validate();
    l.chirality = Chirality::L;
  }
}

void DipoleModel::set(int upper, int lower, DipoleAxis axis, double value) {
  if (lower < 1 || upper > 3 || lower >= upper) {
    throw std::domain_error("dipole indices must satisfy 1 <= lower < upper <= 3");
  }
  if (!std::isfinite(value)) throw std::domain_error("dipole element must be finite");
  if (!dipole_component_allowed(labels_[upper - 1], labels_[lower - 1], axis)) {
    throw std::domain_error("<v" + std::to_string(upper) + "|mu_" + to_string(axis) + "|v" +
                            std::to_string(lower) + "> is forbidden by chi parity");
  }
  elements_[{upper, lower, axis}] = value;
}

double DipoleModel::element(int upper, int lower, DipoleAxis axis, Chirality q) const {
  if (upper < lower) std::swap(upper, lower);
  const auto it = elements_.find({upper, lower, axis});
  if (it == elements_.end()) return 0.0;
  if (q == Chirality::L) return it->second;
  return chirality_sign(labels_[upper - 1], labels_[lower - 1], axis) * it->second;
}

VibrationalLabel DipoleModel::label(int index, Chirality q) const {
  VibrationalLabel v = labels_.at(static_cast<std::size_t>(index - 1));
  v.chirality = q;
  return v;
}

int DipoleModel::index_of(const VibrationalLabel& v) const {
  for (int i = 0; i < 3; ++i)
    if (labels_[i].same_state(v)) return i + 1;
  return 0;
}

bool CouplingSet::finite() const {
  for (const cplx& z : {omega21, omega3p1, omega3p2, omega3m1, omega3m2})
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
  return true;
}

double Level::norm_squared() const {
  double n = 0.0;
  for (const auto& c : rotation) n += std::norm(c.amplitude);
  return n;
}

Level working_level(WorkingState s, const DipoleModel& dip, Chirality q) {
  const double h = std::numbers::sqrt2 / 2.0;
  switch (s) {
    case WorkingState::One:
      return {dip.label(1, q), {{1.0, {0, 0, 0}}}};
    case WorkingState::Two:
      return {dip.label(2, q), {{1.0, {1, 0, -1}}}};
    case WorkingState::ThreePlus:
      return {dip.label(3, q), {{h, {1, 1, 0}}, {h, {1, -1, 0}}}};
    case WorkingState::ThreeMinus:
      return {dip.label(3, q), {{h, {1, 1, 0}}, {-h, {1, -1, 0}}}};
  }
  throw std::domain_error("unknown working state");
}

cplx spherical_dipole(const DipoleModel& dip, const VibrationalLabel& upper,
                      const VibrationalLabel& lower, int sigma_prime) {
  const int u = dip.index_of(upper);
  const int l = dip.index_of(lower);
  if (u == 0 || l == 0) throw std::domain_error("vibrational label not in the dipole model");
  if (upper.chirality != lower.chirality) {
    throw std::domain_error("transition dipoles connect states of one enantiomer only");
  }
  if (u == l) return 0.0;  // permanent dipoles are outside the model
  const Chirality q = upper.chirality;
  switch (sigma_prime) {
    case 0:
      return dip.element(u, l, DipoleAxis::Z, q);
    case 1:
    case -1: {
      const double mx = dip.element(u, l, DipoleAxis::X, q);
      const double my = dip.element(u, l, DipoleAxis::Y, q);
      return (kI * my + static_cast<double>(sigma_prime) * mx) / std::numbers::sqrt2;
    }
    default:
      throw std::domain_error("sigma' must be -1, 0 or +1");
  }
}

cplx coupling_general(const DriveField& field, const Level& upper, const Level& lower,
                      const DipoleModel& dip) {
  field.validate();
  for (const Level* lv : {&upper, &lower}) {
    if (std::abs(lv->norm_squared() - 1.0) > 1e-12) {
      throw std::domain_error("level is not normalized");
    }
    for (const auto& c : lv->rotation) c.ket.validate();
  }
  if (upper.vib.chirality != lower.vib.chirality) {
    throw std::domain_error("levels belong to different enantiomers");
  }

  const int sigma = field.sigma;
  cplx total = 0.0;
  for (const auto& cu : upper.rotation) {
    for (const auto& cl : lower.rotation) {
      const RotationalKet& ju = cu.ket;
      const RotationalKet& jl = cl.ket;
      for (int sp = -1; sp <= 1; ++sp) {
        if (!dipole_transition_allowed(jl, ju, sigma, sp)) continue;
        const cplx mu = spherical_dipole(dip, upper.vib, lower.vib, sp);
        if (mu == cplx{}) continue;
        const double w_space = dipole_3j(ju.j, ju.m, jl.j, jl.m, sigma);
        const double w_body = dipole_3j(ju.j, ju.k, jl.j, jl.k, sp);
        const int phase_exp = sigma + sp - jl.k + jl.m;
        const double sign = (phase_exp % 2 == 0) ? 1.0 : -1.0;
        const double deg = std::sqrt(static_cast<double>((2 * ju.j + 1) * (2 * jl.j + 1)));
        total += std::conj(cu.amplitude) * cl.amplitude * deg * mu * sign * w_space * w_body;
      }
    }
  }
  return 0.5 * field.amplitude * phase_factor(field.phase) * total;
}

CouplingSet build_coupling_set(const FieldTriple& fields, const DipoleModel& dip, Chirality q) {
  fields.validate();
  const WorkingSetReport report =
      validate_working_set(dip.label(1, q), dip.label(2, q), dip.label(3, q));
  if (!report.all_passed()) {
    throw std::domain_error("working set rejected: " + report.failures());
  }

  const double s36 = std::sqrt(3.0) / 6.0;
  const cplx e12 = fields.f12.amplitude * phase_factor(fields.f12.phase);
  const cplx e23 = fields.f23.amplitude * phase_factor(fields.f23.phase);
  const cplx e13 = fields.f13.amplitude * phase_factor(fields.f13.phase);
  const auto mu = [&](int u, int l, DipoleAxis a) { return dip.element(u, l, a, Chirality::L); };

  CouplingSet c;
  c.omega21 = s36 * e12 * mu(2, 1, DipoleAxis::Z);
  c.omega3p2 = 0.25 * e23 * mu(3, 2, DipoleAxis::X);
  c.omega3m2 = 0.25 * kI * e23 * mu(3, 2, DipoleAxis::Y);
  c.omega3p1 = kI * s36 * e13 * mu(3, 1, DipoleAxis::Y);
  c.omega3m1 = s36 * e13 * mu(3, 1, DipoleAxis::X);
  if (q == Chirality::R) c.omega21 = -c.omega21;
  return c;
}

double loop_phase(const CouplingSet& c, bool plus_loop) {
  const cplx o32 = plus_loop ? c.omega3p2 : c.omega3m2;
  const cplx o31 = plus_loop ? c.omega3p1 : c.omega3m1;
  return std::arg(c.omega21 * o32 * std::conj(o31));
}

}  // namespace esst
