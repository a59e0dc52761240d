#pragma once

// Dense reference routines that avoid Eigen's decompositions: a cyclic Jacobi
// eigenvalue solver and a Taylor-series matrix exponential in long double.

#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

namespace oracle {

using Complex = std::complex<double>;
using ComplexMatrix = std::vector<std::vector<Complex>>;

/// Eigenvalues of a real symmetric matrix (cyclic Jacobi rotations), ascending.
inline std::vector<double> jacobi_eigenvalues(std::vector<std::vector<double>> a) {
  const std::size_t n = a.size();
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) off += a[p][q] * a[p][q];
    if (off < 1e-30) break;
    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        if (a[p][q] == 0.0) continue;
        const double theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
        const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0), s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = a[k][p], akq = a[k][q];
          a[k][p] = c * akp - s * akq;
          a[k][q] = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = a[p][k], aqk = a[q][k];
          a[p][k] = c * apk - s * aqk;
          a[q][k] = s * apk + c * aqk;
        }
      }
    }
  }
  std::vector<double> ev(n);
  for (std::size_t i = 0; i < n; ++i) ev[i] = a[i][i];
  std::sort(ev.begin(), ev.end());
  return ev;
}

/// Eigenvalues of a Hermitian matrix via its real embedding [[Re, -Im], [Im, Re]],
/// whose spectrum is the Hermitian one with every eigenvalue doubled.
inline std::vector<double> hermitian_eigenvalues(const ComplexMatrix& h) {
  const std::size_t n = h.size();
  std::vector<std::vector<double>> m(2 * n, std::vector<double>(2 * n));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      m[i][j] = h[i][j].real();
      m[i + n][j + n] = h[i][j].real();
      m[i][j + n] = -h[i][j].imag();
      m[i + n][j] = h[i][j].imag();
    }
  }
  const std::vector<double> doubled = jacobi_eigenvalues(m);
  std::vector<double> ev;
  for (std::size_t i = 0; i < doubled.size(); i += 2) ev.push_back(doubled[i]);
  return ev;
}

/// exp(-i H t) applied to psi by scaling and squaring a Taylor series.
inline std::vector<Complex> taylor_propagate(const ComplexMatrix& h, const std::vector<Complex>& psi,
                                             double t) {
  using LC = std::complex<long double>;
  using LM = std::vector<std::vector<LC>>;
  const std::size_t n = h.size();
  long double norm = 0;
  for (const auto& row : h)
    for (const auto& x : row) norm = std::max<long double>(norm, std::abs(x) * std::abs(t));
  int squarings = 0;
  long double scale = 1;
  while (norm * n / scale > 0.25L) {
    scale *= 2;
    ++squarings;
  }
  LM a(n, std::vector<LC>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) a[i][j] = LC(0, -1) * LC(h[i][j]) * (long double)(t / scale);
  auto mul = [n](const LM& x, const LM& y) {
    LM z(n, std::vector<LC>(n));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t k = 0; k < n; ++k)
        for (std::size_t j = 0; j < n; ++j) z[i][j] += x[i][k] * y[k][j];
    return z;
  };
  LM e(n, std::vector<LC>(n)), term(n, std::vector<LC>(n));
  for (std::size_t i = 0; i < n; ++i) e[i][i] = term[i][i] = 1;
  for (int k = 1; k <= 30; ++k) {
    term = mul(term, a);
    for (auto& row : term)
      for (auto& x : row) x /= (long double)k;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) e[i][j] += term[i][j];
  }
  for (int s = 0; s < squarings; ++s) e = mul(e, e);
  std::vector<Complex> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    LC acc = 0;
    for (std::size_t j = 0; j < n; ++j) acc += e[i][j] * LC(psi[j]);
    out[i] = Complex(static_cast<double>(acc.real()), static_cast<double>(acc.imag()));
  }
  return out;
}

}  // namespace oracle
