#include "esst/angular.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_int.hpp>

namespace esst {

namespace mp = boost::multiprecision;

namespace {

const mp::cpp_int& factorial(int n) {
  // Largest argument is j1+j2+j3+1 <= 31 for j <= 10.
  static const std::vector<mp::cpp_int> table = [] {
    std::vector<mp::cpp_int> f(3 * (ThreeJArgs::kMaxTwoJ / 2) + 2);
    f[0] = 1;
    for (std::size_t i = 1; i < f.size(); ++i) f[i] = f[i - 1] * static_cast<unsigned>(i);
    return f;
  }();
  return table.at(static_cast<std::size_t>(n));
}

bool same_parity(int a, int b) { return ((a - b) % 2) == 0; }

// Small-j table: doubled j in [0, 4], doubled m in [-4, 4].
constexpr int kTableTwoJ = 4;
constexpr int kJSpan = kTableTwoJ + 1;
constexpr int kMSpan = 2 * kTableTwoJ + 1;

std::size_t table_index(const std::array<int, 3>& tj, const std::array<int, 3>& tm) {
  std::size_t idx = 0;
  for (int i = 0; i < 3; ++i) idx = idx * kJSpan + static_cast<std::size_t>(tj[i]);
  for (int i = 0; i < 3; ++i) idx = idx * kMSpan + static_cast<std::size_t>(tm[i] + kTableTwoJ);
  return idx;
}

const std::vector<double>& small_table() {
  static const std::vector<double> table = [] {
    std::vector<double> t(static_cast<std::size_t>(kJSpan * kJSpan * kJSpan) * kMSpan * kMSpan *
                              kMSpan,
                          0.0);
    std::array<int, 3> tj{};
    std::array<int, 3> tm{};
    for (tj[0] = 0; tj[0] <= kTableTwoJ; ++tj[0])
      for (tj[1] = 0; tj[1] <= kTableTwoJ; ++tj[1])
        for (tj[2] = 0; tj[2] <= kTableTwoJ; ++tj[2])
          for (tm[0] = -tj[0]; tm[0] <= tj[0]; tm[0] += 2)
            for (tm[1] = -tj[1]; tm[1] <= tj[1]; tm[1] += 2) {
              tm[2] = -tm[0] - tm[1];
              if (std::abs(tm[2]) > tj[2] || !same_parity(tm[2], tj[2])) continue;
              t[table_index(tj, tm)] = wigner_3j_uncached(
                  ThreeJArgs::doubled(tj[0], tj[1], tj[2], tm[0], tm[1], tm[2]));
            }
    return t;
  }();
  return table;
}

}  // namespace

ThreeJArgs ThreeJArgs::doubled(int two_j1, int two_j2, int two_j3, int two_m1, int two_m2,
                               int two_m3) {
  const std::array<int, 3> tj{two_j1, two_j2, two_j3};
  const std::array<int, 3> tm{two_m1, two_m2, two_m3};
  for (int i = 0; i < 3; ++i) {
    const std::string col = "column " + std::to_string(i + 1);
    if (tj[i] < 0) throw std::domain_error("3j: negative j in " + col);
    if (tj[i] > kMaxTwoJ) throw std::domain_error("3j: j > 10 in " + col);
    if (std::abs(tm[i]) > tj[i]) throw std::domain_error("3j: |m| > j in " + col);
    if (!same_parity(tj[i], tm[i])) {
      throw std::domain_error("3j: j and m differ in integrality in " + col);
    }
  }
  return ThreeJArgs(tj, tm);
}

double wigner_3j_uncached(const ThreeJArgs& args) {
  const auto& tj = args.two_j();
  const auto& tm = args.two_m();
  if (tm[0] + tm[1] + tm[2] != 0) return 0.0;
  if (tj[2] < std::abs(tj[0] - tj[1]) || tj[2] > tj[0] + tj[1]) return 0.0;
  if ((tj[0] + tj[1] + tj[2]) % 2 != 0) return 0.0;

  // Every combination below is an integer once the checks above pass.
  const int j1 = tj[0], j2 = tj[1], j3 = tj[2];
  const int m1 = tm[0], m2 = tm[1], m3 = tm[2];
  const int a = (j1 + j2 - j3) / 2;
  const int b = (j1 - j2 + j3) / 2;
  const int c = (-j1 + j2 + j3) / 2;
  const int big = (j1 + j2 + j3) / 2 + 1;

  const int k_min = std::max({0, (j2 - j3 - m1) / 2, (j1 - j3 + m2) / 2});
  const int k_max = std::min({a, (j1 - m1) / 2, (j2 + m2) / 2});
  if (k_min > k_max) return 0.0;

  mp::cpp_rational sum = 0;
  for (int k = k_min; k <= k_max; ++k) {
    const mp::cpp_int den = factorial(k) * factorial((j3 - j2 + m1) / 2 + k) *
                            factorial((j3 - j1 - m2) / 2 + k) * factorial(a - k) *
                            factorial((j1 - m1) / 2 - k) * factorial((j2 + m2) / 2 - k);
    const mp::cpp_rational term(mp::cpp_int(1), den);
    if (k % 2 == 0) {
      sum += term;
    } else {
      sum -= term;
    }
  }
  if (sum == 0) return 0.0;

  const mp::cpp_int numer_sq = factorial(a) * factorial(b) * factorial(c) *
                               factorial((j1 + m1) / 2) * factorial((j1 - m1) / 2) *
                               factorial((j2 + m2) / 2) * factorial((j2 - m2) / 2) *
                               factorial((j3 + m3) / 2) * factorial((j3 - m3) / 2);
  const mp::cpp_rational squared = mp::cpp_rational(numer_sq, factorial(big)) * sum * sum;

  using Wide = mp::cpp_bin_float_50;
  const Wide magnitude = mp::sqrt(Wide(mp::numerator(squared)) / Wide(mp::denominator(squared)));

  const int phase_exp = (j1 - j2 - m3) / 2;
  const bool negative = (std::abs(phase_exp) % 2 == 1) != (sum < 0);
  const double value = magnitude.convert_to<double>();
  return negative ? -value : value;
}

double wigner_3j(const ThreeJArgs& args) {
  const auto& tj = args.two_j();
  if (tj[0] <= kTableTwoJ && tj[1] <= kTableTwoJ && tj[2] <= kTableTwoJ) {
    return small_table()[table_index(tj, args.two_m())];
  }
  return wigner_3j_uncached(args);
}

double dipole_3j(int j, int m, int j_prime, int m_prime, int sigma) {
  return wigner_3j(ThreeJArgs::integer(j, 1, j_prime, m, -sigma, -m_prime));
}

bool dipole_transition_allowed(const RotationalKet& lower, const RotationalKet& upper, int sigma,
                               int sigma_prime) {
  lower.validate();
  upper.validate();
  if (std::abs(sigma) > 1 || std::abs(sigma_prime) > 1) {
    throw std::domain_error("helicity components must lie in {-1, 0, +1}");
  }
  const int dj = upper.j - lower.j;
  if (std::abs(dj) > 1) return false;
  if (lower.j == 0 && upper.j == 0) return false;
  return upper.m - lower.m == sigma && upper.k - lower.k == sigma_prime;
}

}  // namespace esst
