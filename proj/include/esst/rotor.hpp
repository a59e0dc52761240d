#pragma once

#include <compare>
#include <string>

namespace esst {

/// Rotational constants of a prolate symmetric top (A > B = C > 0), rad/s.
class RotorConstants {
 public:
  /// Throws std::domain_error unless A > B = C > 0.
  RotorConstants(double a, double b, double c);

  /// Prolate top with B = C.
  static RotorConstants prolate(double a, double c) { return {a, c, c}; }

  double a() const { return a_; }
  double b() const { return b_; }
  double c() const { return c_; }

 private:
  double a_;
  double b_;
  double c_;
};

/// Symmetric-top eigenstate |J, K, M>. K is the molecule-frame projection,
/// M the space-frame projection.
struct RotationalKet {
  int j = 0;
  int k = 0;
  int m = 0;

  bool valid() const;
  /// Throws std::domain_error when |K| > J, |M| > J or J < 0.
  void validate() const;
  std::string to_string() const;

  friend auto operator<=>(const RotationalKet&, const RotationalKet&) = default;
};

/// eps_{J,K} = C J(J+1) + (A - C) K^2. Independent of M.
double rotational_energy(const RotorConstants& c, const RotationalKet& ket);

}  // namespace esst
