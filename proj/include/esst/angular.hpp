#pragma once

#include <array>

#include "esst/rotor.hpp"

namespace esst {

/// Arguments of a Wigner 3j symbol
///
///   ( j1 j2 j3 )
///   ( m1 m2 m3 )
///
/// Angular momenta are stored doubled so half-integers stay exact.
class ThreeJArgs {
 public:
  /// All six arguments given as twice their value. Throws std::domain_error on
  /// negative j, |m| > j, mismatched integrality of a (j, m) pair, or j > 10.
  static ThreeJArgs doubled(int two_j1, int two_j2, int two_j3, int two_m1, int two_m2,
                            int two_m3);
  static ThreeJArgs integer(int j1, int j2, int j3, int m1, int m2, int m3) {
    return doubled(2 * j1, 2 * j2, 2 * j3, 2 * m1, 2 * m2, 2 * m3);
  }

  const std::array<int, 3>& two_j() const { return two_j_; }
  const std::array<int, 3>& two_m() const { return two_m_; }

  /// Largest supported j (doubled).
  static constexpr int kMaxTwoJ = 20;

 private:
  ThreeJArgs(std::array<int, 3> two_j, std::array<int, 3> two_m) : two_j_(two_j), two_m_(two_m) {}
  std::array<int, 3> two_j_;
  std::array<int, 3> two_m_;
};

/// Exact Wigner 3j symbol via the Racah single sum. Factorials and the sum are
/// carried in exact rational arithmetic; a single square root happens at the
/// end. Returns 0 when m1+m2+m3 != 0 or the triangle condition fails. Values
/// with every j <= 2 come from a table built on first use.
double wigner_3j(const ThreeJArgs& args);

/// Evaluates without the small-j table. Used to build the table and by tests.
double wigner_3j_uncached(const ThreeJArgs& args);

/// W^{(sigma)}_{J M, J' M'} = ( J 1 J' ; M -sigma -M' ), the symbol that
/// appears in electric-dipole matrix elements between rotor states.
double dipole_3j(int j, int m, int j_prime, int m_prime, int sigma);

/// Electric-dipole selection rule between symmetric-top states driven by a
/// field of helicity `sigma` through molecule-frame component `sigma_prime`:
/// dJ in {0, +-1} (no 0 -> 0), dM = sigma, dK = sigma_prime, where the deltas
/// are upper minus lower.
bool dipole_transition_allowed(const RotationalKet& lower, const RotationalKet& upper, int sigma,
                               int sigma_prime);

}  // namespace esst
