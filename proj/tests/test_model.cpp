#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "doctest.h"
#include "esst/model.hpp"
#include "fixtures.hpp"
#include "oracles/linear_algebra.hpp"

using namespace esst;
using fixtures::mhz;

namespace {

CouplingSet random_couplings(double scale) {
  auto c = [scale] { return std::polar(fixtures::uniform(0.05, 1.0) * scale, fixtures::uniform(-3.2, 3.2)); };
  return {c(), c(), c(), c(), c()};
}

oracle::ComplexMatrix to_oracle(const HamiltonianMatrix& h) {
  oracle::ComplexMatrix m(static_cast<std::size_t>(h.dimension()),
                          std::vector<cplx>(static_cast<std::size_t>(h.dimension())));
  for (Eigen::Index i = 0; i < h.dimension(); ++i)
    for (Eigen::Index j = 0; j < h.dimension(); ++j)
      m[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = h.h(i, j);
  return m;
}

}  // namespace

TEST_CASE("level ordering") {
  CHECK_NOTHROW(LevelFrequencies{0.0, 1.0, 2.0}.validate());
  CHECK_THROWS_AS(LevelFrequencies({0.0, 2.0, 1.0}).validate(), std::domain_error);
  CHECK_THROWS_AS(LevelFrequencies({1.0, 1.0, 2.0}).validate(), std::domain_error);
}

TEST_CASE("detunings enforce three-photon resonance") {
  CHECK_NOTHROW(Detunings(mhz(1), mhz(3), mhz(2)));
  CHECK_THROWS_AS(Detunings(mhz(1), mhz(3.1), mhz(2)), std::domain_error);
  const LevelFrequencies lv{0.0, mhz(30), mhz(80)};
  const CarrierFrequencies cf{mhz(29), mhz(47), mhz(76)};
  const Detunings d = Detunings::from_frequencies(lv, cf);
  CHECK(d.delta12() == doctest::Approx(mhz(1)));
  CHECK(d.delta23() == doctest::Approx(mhz(3)));
  CHECK(d.delta13() == doctest::Approx(mhz(4)));
  CHECK_THROWS_AS(Detunings::from_frequencies(lv, {mhz(29), mhz(47), mhz(75)}), std::domain_error);
}

TEST_CASE("lab-frame Hamiltonian") {
  const LevelFrequencies lv{0.0, mhz(30), mhz(80)};
  const CarrierFrequencies cf{mhz(30), mhz(30), mhz(60)};
  const CouplingSet c = random_couplings(mhz(1));
  const HamiltonianMatrix h0 = build_lab_hamiltonian(lv, c, cf, 0.0);
  CHECK(h0.h(1, 0) == c.omega21);
  CHECK(h0.h(2, 1) == c.omega3p2);
  CHECK(h0.h(2, 0) == c.omega3p1);
  CHECK(h0.h(3, 1) == c.omega3m2);
  CHECK(h0.h(3, 0) == c.omega3m1);
  CHECK(h0.h(2, 3) == cplx{});
  for (double t : {1.3e-7, 2.9e-6, 7.7e-6}) {
    const HamiltonianMatrix h = build_lab_hamiltonian(lv, c, cf, t);
    CHECK(h.hermiticity_residual() <= 1e-12);
    CHECK(h.h(2, 3) == cplx{});
    CHECK(std::abs(h.h(1, 0)) == doctest::Approx(std::abs(c.omega21)));
  }
}

TEST_CASE("interaction-picture Hamiltonian") {
  SUBCASE("resonant 1-2 field") {
    const HamiltonianMatrix h =
        build_interaction_hamiltonian(CouplingSet{}, Detunings::resonant_pair(mhz(20)));
    CHECK(h.h.isApprox(Eigen::Vector4cd(0, 0, mhz(20), mhz(20)).asDiagonal().toDenseMatrix()));
    CHECK(h.labels == four_level_labels());
  }
  SUBCASE("eigenvalues agree with the Jacobi oracle") {
    for (int trial = 0; trial < 50; ++trial) {
      const double d12 = mhz(fixtures::uniform(-2, 2)), d23 = mhz(fixtures::uniform(-30, 30));
      const HamiltonianMatrix h =
          build_interaction_hamiltonian(random_couplings(mhz(3)), Detunings(d12, d12 + d23, d23));
      CHECK(h.hermiticity_residual() <= 1e-12);
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h.h);
      const std::vector<double> ref = oracle::hermitian_eigenvalues(to_oracle(h));
      for (int i = 0; i < 4; ++i) {
        CHECK(std::abs(es.eigenvalues()(i) - ref[static_cast<std::size_t>(i)]) <= 1e-9 * mhz(1));
      }
    }
  }
}

TEST_CASE("adiabatic elimination closed forms") {
  SUBCASE("equal real couplings") {
    CouplingSet c;
    c.omega3p1 = c.omega3p2 = c.omega3m1 = c.omega3m2 = mhz(1);
    const EffectiveParams e = adiabatic_eliminate(c, mhz(20));
    CHECK(e.omega_eff.real() == doctest::Approx(mhz(-0.1)).epsilon(1e-14));
    CHECK(e.omega_eff.imag() == 0.0);
    CHECK(e.lambda1 == doctest::Approx(mhz(-0.1)).epsilon(1e-14));
    CHECK(e.lambda2 == doctest::Approx(mhz(-0.1)).epsilon(1e-14));
    CHECK(e.lambda_diff() == 0.0);
    CHECK(e.common_shift == doctest::Approx(mhz(-0.1)).epsilon(1e-14));
  }
  SUBCASE("reference couplings") {
    const EffectiveParams e = adiabatic_eliminate(fixtures::reference_couplings(-0.1), mhz(20));
    CHECK(std::abs(e.omega_eff - cplx(mhz(0.1), 0)) <= 1e-12 * mhz(1));
    CHECK(e.lambda1 == doctest::Approx(e.lambda2).epsilon(1e-15));
  }
  SUBCASE("cancelling loops") {
    CouplingSet c;
    c.omega3p1 = mhz(1);
    c.omega3p2 = mhz(1);
    c.omega3m1 = mhz(1);
    c.omega3m2 = -mhz(1);
    CHECK(std::abs(adiabatic_eliminate(c, mhz(20)).omega_eff) == 0.0);
  }
  SUBCASE("shift signs oppose the detuning") {
    for (int trial = 0; trial < 100; ++trial) {
      const double delta = mhz(fixtures::uniform(5, 50)) * (fixtures::uniform_int(0, 1) ? 1 : -1);
      const EffectiveParams e = adiabatic_eliminate(random_couplings(mhz(1)), delta);
      CHECK(e.lambda1 * delta < 0);
      CHECK(e.lambda2 * delta < 0);
    }
  }
  SUBCASE("errors") {
    CHECK_THROWS_AS(adiabatic_eliminate(CouplingSet{}, 0.0), std::domain_error);
    CHECK_THROWS_AS(adiabatic_eliminate(CouplingSet{}, Detunings(mhz(1), mhz(21), mhz(20))),
                    std::domain_error);
  }
}

TEST_CASE("second-order shifts converge to the four-level spectrum") {
  // For Delta > 0 the two lowest dressed energies of the four-level model approach the
  // eliminated two-level energies (plus the common shift) as 1/Delta^3.
  const CouplingSet c = fixtures::reference_couplings(0.0);
  std::vector<double> err;
  for (double d : {40.0, 80.0, 160.0}) {
    const double delta = mhz(d);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> full(
        build_interaction_hamiltonian(c, Detunings::resonant_pair(delta)).h);
    const EffectiveParams e = adiabatic_eliminate(c, delta);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> two(build_two_level(e, 0.0, Chirality::L).h);
    double worst = 0.0;
    for (int i = 0; i < 2; ++i) {
      worst = std::max(worst, std::abs(full.eigenvalues()(i) -
                                       (two.eigenvalues()(i) + e.common_shift)));
    }
    err.push_back(worst);
  }
  CHECK(err[0] / err[1] >= 6.0);
  CHECK(err[1] / err[2] >= 6.0);
}

TEST_CASE("hierarchy ratios") {
  CouplingSet c;
  c.omega3p1 = c.omega3p2 = c.omega3m1 = c.omega3m2 = mhz(1);
  c.omega21 = mhz(0.1);
  const HierarchyDiagnostics h = hierarchy_ratio(c, mhz(20));
  CHECK(h.r1 == doctest::Approx(0.05).epsilon(1e-14));
  CHECK(h.r2 == doctest::Approx(0.1).epsilon(1e-14));
  CHECK(h.large_detuning());
  CHECK(hierarchy_ratio(c, mhz(1)).r1 == doctest::Approx(1.0));
  CHECK(hierarchy_ratio(c, mhz(40)).r1 == doctest::Approx(h.r1 / 2));
}

TEST_CASE("two-level Hamiltonian") {
  const EffectiveParams e = adiabatic_eliminate(fixtures::reference_couplings(0.0), mhz(20));
  const cplx o21 = -e.omega_eff;
  const HamiltonianMatrix hl = build_two_level(e, o21, Chirality::L);
  const HamiltonianMatrix hr = build_two_level(e, o21, Chirality::R);
  CHECK(std::abs(hl.h(1, 0)) <= 1e-20);
  CHECK(std::abs(hr.h(1, 0) - 2.0 * e.omega_eff) <= 1e-9);
  CHECK(std::abs(hr.h.trace()) <= 1e-9);
  CHECK(std::abs(hr.h(0, 0)) <= 1e-9);
  CHECK(hr.labels == two_level_labels());
  CHECK(effective_coupling(e, o21, Chirality::R) == e.omega_eff - o21);
  CHECK(effective_coupling(e, o21, Chirality::L) == e.omega_eff + o21);

  EffectiveParams shifted = e;
  shifted.lambda1 = mhz(0.3);
  shifted.lambda2 = mhz(-0.1);
  const HamiltonianMatrix hs = build_two_level(shifted, o21, Chirality::R);
  CHECK(hs.h(0, 0).real() == doctest::Approx(mhz(0.2)));
  CHECK(hs.h(1, 1).real() == doctest::Approx(mhz(-0.2)));
  CHECK(hs.hermiticity_residual() == 0.0);
}

TEST_CASE("effective four-level Hamiltonian") {
  const CouplingSet c = fixtures::reference_couplings(-0.1);
  const EffectiveParams e = adiabatic_eliminate(c, mhz(20));
  const HamiltonianMatrix h = build_effective_four_level(e, c.omega21, mhz(20));
  CHECK(h.dimension() == 4);
  CHECK(h.hermiticity_residual() <= 1e-12);
  CHECK(std::abs(h.h(0, 0) - e.lambda1) <= 1e-9);
  CHECK(std::abs(h.h(1, 1) - e.lambda2) <= 1e-9);
  CHECK(std::abs(std::abs(h.h(3, 2)) - std::abs(e.omega_eff_prime)) <= 1e-9);
}
