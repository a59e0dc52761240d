#include <cmath>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "esst/scan.hpp"
#include "fixtures.hpp"

using namespace esst;
using fixtures::mhz;

TEST_CASE("parallel and serial scans agree") {
  const CouplingSet c = fixtures::reference_couplings(-0.1);
  const std::vector<double> deltas{mhz(10), mhz(20), mhz(40), mhz(80)};
  const EliminationScan a = elimination_error_scan(c, deltas, 801);
  const EliminationScan b = elimination_error_scan_serial(c, deltas, 801);
  REQUIRE(a.points.size() == 4);
  REQUIRE(a.ratios.size() == 3);
  for (std::size_t k = 0; k < 4; ++k) {
    CHECK(a.points[k].delta == deltas[k]);
    CHECK(a.points[k].error_l == b.points[k].error_l);
    CHECK(a.points[k].error_r == b.points[k].error_r);
    CHECK(a.points[k].period_r == b.points[k].period_r);
  }
}

TEST_CASE("elimination error shrinks with the detuning") {
  const CouplingSet c = fixtures::reference_couplings(-0.1);
  const std::vector<double> deltas{mhz(10), mhz(20), mhz(40), mhz(80)};
  const EliminationScan s = elimination_error_scan(c, deltas);
  for (std::size_t k = 0; k < s.ratios.size(); ++k) {
    CHECK(s.points[k + 1].error() < s.points[k].error());
    CHECK(s.ratios[k] == doctest::Approx(s.points[k].error() / s.points[k + 1].error()));
    // Far from the crossover the error falls at least as 1/Delta^2 (ratio ~4 per doubling).
    CHECK(s.ratios[k] >= 3.5);
  }
  CHECK(s.points.back().error() <= 5e-3);
  // At Delta = 20 the R enantiomer sees 2 Omega_eff = 2pi x 0.2 MHz.
  CHECK(s.points[1].period_r == doctest::Approx(2.5e-6).epsilon(1e-12));
  CHECK(s.points[0].r1 == doctest::Approx(0.1).epsilon(1e-12));
}

TEST_CASE("scan error cases") {
  CouplingSet c = fixtures::reference_couplings(0.0);
  // With Omega21 = 0 and zero Omega_eff (cancelling loops) nothing moves.
  c.omega3m2 = mhz(1);
  const std::vector<double> one{mhz(20)};
  CHECK_THROWS_AS(elimination_error_scan(c, one), std::domain_error);
  CHECK_THROWS_AS(elimination_error_scan_serial(c, one), std::domain_error);
  const std::vector<double> zero{0.0};
  CHECK_THROWS_AS(elimination_error_scan(fixtures::reference_couplings(-0.1), zero), std::domain_error);
  CHECK(elimination_error_scan(fixtures::reference_couplings(-0.1), std::vector<double>{}).points.empty());
}
