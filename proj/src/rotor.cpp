#include "esst/rotor.hpp"

#include <cmath>
#include <cstdlib>
#include <stdexcept>

namespace esst {

RotorConstants::RotorConstants(double a, double b, double c) : a_(a), b_(b), c_(c) {
  if (!(std::isfinite(a) && std::isfinite(b) && std::isfinite(c))) {
    throw std::domain_error("rotor constants must be finite");
  }
  if (!(c > 0.0)) throw std::domain_error("rotor constant C must be positive");
  if (std::abs(b - c) > 1e-12 * std::abs(c)) {
    throw std::domain_error("symmetric top requires B = C");
  }
  if (!(a > b)) throw std::domain_error("prolate top requires A > B");
}

bool RotationalKet::valid() const {
  return j >= 0 && std::abs(k) <= j && std::abs(m) <= j;
}

void RotationalKet::validate() const {
  if (!valid()) throw std::domain_error("invalid rotational ket " + to_string());
}

std::string RotationalKet::to_string() const {
  return "|" + std::to_string(j) + "," + std::to_string(k) + "," + std::to_string(m) + ">";
}

double rotational_energy(const RotorConstants& c, const RotationalKet& ket) {
  ket.validate();
  const double jj = static_cast<double>(ket.j) * (ket.j + 1);
  const double kk = static_cast<double>(ket.k) * ket.k;
  return c.c() * jj + (c.a() - c.c()) * kk;
}

}  // namespace esst
