#pragma once

// Shared parameter sets for the test suites.

#include <array>
#include <cmath>
#include <numbers>
#include <random>

#include "esst/drive.hpp"
#include "esst/units.hpp"

namespace fixtures {

using esst::cplx;

inline esst::VibrationalLabel label(int m, int n, esst::ChiParity p) {
  esst::VibrationalLabel v;
  v.m_tilde = m;
  v.n_tilde = n;
  v.chi_parity = p;
  return v;
}

/// v1 = |0>|0+>, v2 = |1>|0+>, v3 = |1>|0->.
inline std::array<esst::VibrationalLabel, 3> working_labels() {
  return {label(0, 0, esst::ChiParity::Even), label(1, 0, esst::ChiParity::Even),
          label(1, 0, esst::ChiParity::Odd)};
}

inline esst::DipoleModel dipoles(double z21, double x31, double y31, double x32, double y32) {
  esst::DipoleModel d(working_labels());
  d.set(2, 1, esst::DipoleAxis::Z, z21);
  d.set(3, 1, esst::DipoleAxis::X, x31);
  d.set(3, 1, esst::DipoleAxis::Y, y31);
  d.set(3, 2, esst::DipoleAxis::X, x32);
  d.set(3, 2, esst::DipoleAxis::Y, y32);
  return d;
}

/// Dipoles of the bundled configurations.
inline esst::DipoleModel reference_dipoles() { return dipoles(1, 1, 1, 1, -1); }

/// Fields of the bundled configurations; the 1-2 field is left off.
/// They give |Omega3+-.| = 2pi x 1 MHz, Lambda1 = Lambda2 and
/// Omega_eff = 2pi x 0.1 MHz at Delta = 2pi x 20 MHz.
inline esst::FieldTriple reference_fields() {
  esst::FieldTriple f;
  f.f23.amplitude = esst::units::from_mhz(4.0);
  f.f23.phase = std::numbers::pi / 2;
  f.f13.amplitude = esst::units::from_mhz(2.0 * std::sqrt(3.0));
  f.f13.phase = 0.0;
  return f;
}

inline double mhz(double v) { return esst::units::from_mhz(v); }

/// Omega3+1 = i, Omega3-1 = 1, Omega3+2 = -i, Omega3-2 = -1 (2pi x MHz) with
/// Omega21 = 2pi x `omega21_mhz`.
inline esst::CouplingSet reference_couplings(double omega21_mhz) {
  esst::CouplingSet c;
  c.omega21 = mhz(omega21_mhz);
  c.omega3p1 = cplx(0, mhz(1));
  c.omega3m1 = mhz(1);
  c.omega3p2 = cplx(0, -mhz(1));
  c.omega3m2 = -mhz(1);
  return c;
}

inline std::mt19937_64& rng() {
  static std::mt19937_64 gen(20240517);
  return gen;
}

inline double uniform(double a, double b) { return std::uniform_real_distribution<double>(a, b)(rng()); }
inline int uniform_int(int a, int b) { return std::uniform_int_distribution<int>(a, b)(rng()); }

}  // namespace fixtures
