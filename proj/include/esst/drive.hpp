#pragma once

#include <array>
#include <complex>
#include <map>
#include <tuple>
#include <vector>

#include "esst/rotor.hpp"
#include "esst/vibronic.hpp"

namespace esst {

using cplx = std::complex<double>;

/// One electromagnetic field component Re{ e_sigma E exp(-i(omega t + phase)) }.
///
/// `amplitude` is in Rabi units: amplitude times a dipole matrix element is an
/// angular frequency.
struct DriveField {
  int sigma = 0;
  double amplitude = 0.0;
  double omega = 0.0;
  double phase = 0.0;

  void validate() const;
};

/// The three fields of the four-level scheme: sigma = -1 drives 1<->2,
/// sigma = +1 drives 2<->3, sigma = 0 drives 1<->3.
struct FieldTriple {
  DriveField f12{-1, 0.0, 0.0, 0.0};
  DriveField f23{+1, 0.0, 0.0, 0.0};
  DriveField f13{0, 0.0, 0.0, 0.0};

  /// Throws std::domain_error unless the helicities are (-1, +1, 0).
  void validate() const;
};

/// Molecule-frame vibrational dipole matrix elements of the L enantiomer.
///
/// Elements are signed reals <v_u|mu_axis|v_l> keyed by the vibrational
/// indices (u > l, 1-based) and axis. Anything not set is zero. R-enantiomer
/// values follow from chirality_sign().
class DipoleModel {
 public:
  /// Labels of v1, v2, v3. Their chirality field is ignored.
  explicit DipoleModel(std::array<VibrationalLabel, 3> labels);

  /// Throws std::domain_error if the component is forbidden by the parity
  /// rules, the indices are not 1 <= lower < upper <= 3, or value is not finite.
  void set(int upper, int lower, DipoleAxis axis, double value);

  /// Matrix element for enantiomer q; symmetric in (upper, lower).
  double element(int upper, int lower, DipoleAxis axis, Chirality q = Chirality::L) const;

  /// Label of v_index (1-based) dressed with chirality q.
  VibrationalLabel label(int index, Chirality q) const;

  /// 1-based index of the vibrational state matching `v`, or 0.
  int index_of(const VibrationalLabel& v) const;

  const std::map<std::tuple<int, int, DipoleAxis>, double>& elements() const { return elements_; }

 private:
  std::array<VibrationalLabel, 3> labels_;
  std::map<std::tuple<int, int, DipoleAxis>, double> elements_;
};

/// The five complex Rabi couplings of the four-level model (rad/s).
struct CouplingSet {
  cplx omega21;
  cplx omega3p1;
  cplx omega3p2;
  cplx omega3m1;
  cplx omega3m2;

  bool finite() const;
};

/// A rotor superposition attached to a vibrational state.
struct Level {
  struct Component {
    cplx amplitude;
    RotationalKet ket;
  };
  VibrationalLabel vib;
  std::vector<Component> rotation;

  double norm_squared() const;
};

enum class WorkingState { One = 0, Two = 1, ThreePlus = 2, ThreeMinus = 3 };

/// The working states |1> = |v1>|0,0,0>, |2> = |v2>|1,0,-1>,
/// |3+-> = |v3>(|1,1,0> +- |1,-1,0>)/sqrt2 for enantiomer q.
Level working_level(WorkingState s, const DipoleModel& dip, Chirality q);

/// Spherical molecule-frame component <v_u|mu_{sigma'}|v_l> with
/// e_0 = e_z and e_{+-1} = (i e_y +- e_x)/sqrt2.
cplx spherical_dipole(const DipoleModel& dip, const VibrationalLabel& upper,
                      const VibrationalLabel& lower, int sigma_prime);

/// Coupling strength between an upper and a lower level from the full
/// rotor/3j expression, extended linearly over rotor superpositions.
/// Selection-rule-forbidden pairs contribute zero. Throws std::domain_error for
/// unnormalized levels or levels of different enantiomers.
cplx coupling_general(const DriveField& field, const Level& upper, const Level& lower,
                      const DipoleModel& dip);

/// Closed-form couplings of the four-level scheme for enantiomer q. L is the
/// sign reference; for R only omega21 changes sign. Throws std::domain_error
/// when the working set fails validation or the helicities are wrong.
CouplingSet build_coupling_set(const FieldTriple& fields, const DipoleModel& dip, Chirality q);

/// Argument of omega21 * omega3{+,-}2 * conj(omega3{+,-}1), the overall phase
/// around the loop 1 -> 2 -> 3{+,-} -> 1.
double loop_phase(const CouplingSet& c, bool plus_loop);

}  // namespace esst
