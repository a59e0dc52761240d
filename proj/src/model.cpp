#include "esst/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace esst {

namespace {

constexpr Eigen::Index k1 = 0;
constexpr Eigen::Index k2 = 1;
constexpr Eigen::Index k3p = 2;
constexpr Eigen::Index k3m = 3;

void set_pair(Eigen::MatrixXcd& h, Eigen::Index upper, Eigen::Index lower, cplx value) {
  h(upper, lower) = value;
  h(lower, upper) = std::conj(value);
}

}  // namespace

void LevelFrequencies::validate() const {
  if (!(omega1 < omega2 && omega2 < omega3)) {
    throw std::domain_error("level frequencies must satisfy omega1 < omega2 < omega3");
  }
}

Detunings::Detunings(double delta12, double delta13, double delta23)
    : d12_(delta12), d13_(delta13), d23_(delta23) {
  const double scale = std::max({std::abs(delta12), std::abs(delta13), std::abs(delta23)});
  if (std::abs(delta13 - delta12 - delta23) > 1e-9 * scale) {
    throw std::domain_error("three-photon resonance violated: Delta13 != Delta12 + Delta23");
  }
}

Detunings Detunings::from_frequencies(const LevelFrequencies& levels,
                                      const CarrierFrequencies& carriers) {
  const double scale = std::max({std::abs(carriers.omega12), std::abs(carriers.omega23),
                                 std::abs(carriers.omega13)});
  if (std::abs(carriers.omega12 + carriers.omega23 - carriers.omega13) > 1e-9 * scale) {
    throw std::domain_error("three-photon resonance violated: omega12 + omega23 != omega13");
  }
  const double d12 = (levels.omega2 - levels.omega1) - carriers.omega12;
  const double d23 = (levels.omega3 - levels.omega2) - carriers.omega23;
  // Recompute Delta13 from the pair so the identity holds to rounding.
  return {d12, d12 + d23, d23};
}

double HamiltonianMatrix::hermiticity_residual() const {
  const double scale = h.cwiseAbs().maxCoeff();
  if (scale == 0.0) return 0.0;
  return (h - h.adjoint()).cwiseAbs().maxCoeff() / scale;
}

const std::vector<std::string>& four_level_labels() {
  static const std::vector<std::string> labels{"1", "2", "3p", "3m"};
  return labels;
}

const std::vector<std::string>& two_level_labels() {
  static const std::vector<std::string> labels{"1", "2"};
  return labels;
}

HamiltonianMatrix build_lab_hamiltonian(const LevelFrequencies& freqs, const CouplingSet& c,
                                        const CarrierFrequencies& carriers, double t) {
  Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(4, 4);
  h(k1, k1) = freqs.omega1;
  h(k2, k2) = freqs.omega2;
  h(k3p, k3p) = freqs.omega3;
  h(k3m, k3m) = freqs.omega3;
  const cplx r12 = std::polar(1.0, -carriers.omega12 * t);
  const cplx r23 = std::polar(1.0, -carriers.omega23 * t);
  const cplx r13 = std::polar(1.0, -carriers.omega13 * t);
  set_pair(h, k2, k1, c.omega21 * r12);
  set_pair(h, k3p, k2, c.omega3p2 * r23);
  set_pair(h, k3p, k1, c.omega3p1 * r13);
  set_pair(h, k3m, k2, c.omega3m2 * r23);
  set_pair(h, k3m, k1, c.omega3m1 * r13);
  return {std::move(h), four_level_labels()};
}

HamiltonianMatrix build_interaction_hamiltonian(const CouplingSet& c, const Detunings& det) {
  Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(4, 4);
  h(k2, k2) = det.delta12();
  h(k3p, k3p) = det.delta13();
  h(k3m, k3m) = det.delta13();
  set_pair(h, k2, k1, c.omega21);
  set_pair(h, k3p, k2, c.omega3p2);
  set_pair(h, k3p, k1, c.omega3p1);
  set_pair(h, k3m, k2, c.omega3m2);
  set_pair(h, k3m, k1, c.omega3m1);
  return {std::move(h), four_level_labels()};
}

EffectiveParams adiabatic_eliminate(const CouplingSet& c, double delta) {
  if (delta == 0.0 || !std::isfinite(delta)) {
    throw std::domain_error("adiabatic elimination needs a finite nonzero detuning");
  }
  EffectiveParams e;
  e.lambda1 = -(std::norm(c.omega3p1) + std::norm(c.omega3m1)) / delta;
  e.lambda2 = -(std::norm(c.omega3p2) + std::norm(c.omega3m2)) / delta;
  e.omega_eff = -(c.omega3p1 * std::conj(c.omega3p2) + c.omega3m1 * std::conj(c.omega3m2)) / delta;
  e.omega_eff_prime =
      (std::conj(c.omega3p1) * c.omega3m1 + std::conj(c.omega3p2) * c.omega3m2) / delta;
  e.common_shift = 0.5 * (e.lambda1 + e.lambda2);
  return e;
}

EffectiveParams adiabatic_eliminate(const CouplingSet& c, const Detunings& det) {
  if (det.delta12() != 0.0) {
    throw std::domain_error("elimination map assumes a resonant 1-2 drive (Delta12 = 0)");
  }
  return adiabatic_eliminate(c, det.delta());
}

HierarchyDiagnostics hierarchy_ratio(const CouplingSet& c, double delta) {
  const double m[] = {std::abs(c.omega3p1), std::abs(c.omega3p2), std::abs(c.omega3m1),
                      std::abs(c.omega3m2)};
  const double largest = *std::max_element(std::begin(m), std::end(m));
  const double smallest = *std::min_element(std::begin(m), std::end(m));
  HierarchyDiagnostics d;
  d.r1 = delta == 0.0 ? std::numeric_limits<double>::infinity() : largest / std::abs(delta);
  d.r2 = smallest == 0.0 ? std::numeric_limits<double>::infinity()
                         : std::abs(c.omega21) / smallest;
  return d;
}

cplx effective_coupling(const EffectiveParams& eff, cplx omega21, Chirality q) {
  return q == Chirality::L ? eff.omega_eff + omega21 : eff.omega_eff - omega21;
}

HamiltonianMatrix build_two_level(const EffectiveParams& eff, cplx omega21, Chirality q) {
  const double half = 0.5 * eff.lambda_diff();
  Eigen::MatrixXcd h(2, 2);
  h(0, 0) = half;
  h(1, 1) = -half;
  const cplx oq = effective_coupling(eff, omega21, q);
  h(1, 0) = oq;
  h(0, 1) = std::conj(oq);
  return {std::move(h), two_level_labels()};
}

HamiltonianMatrix build_effective_four_level(const EffectiveParams& eff, cplx omega21_q,
                                             double delta) {
  Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(4, 4);
  h(k1, k1) = eff.lambda1;
  h(k2, k2) = eff.lambda2;
  h(k3p, k3p) = delta;
  h(k3m, k3m) = delta;
  set_pair(h, k2, k1, eff.omega_eff + omega21_q);
  set_pair(h, k3p, k3m, eff.omega_eff_prime);
  return {std::move(h), four_level_labels()};
}

}  // namespace esst
