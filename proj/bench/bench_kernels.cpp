// OpenMP kernels against their serial references.
#include <complex>
#include <vector>

#include <benchmark/benchmark.h>

#include "esst/dynamics.hpp"
#include "esst/scan.hpp"
#include "esst/units.hpp"

using namespace esst;

namespace {

CouplingSet couplings() {
  CouplingSet c;
  c.omega21 = units::from_mhz(-0.1);
  c.omega3p1 = cplx(0, units::from_mhz(1));
  c.omega3m1 = units::from_mhz(1);
  c.omega3p2 = cplx(0, -units::from_mhz(1));
  c.omega3m2 = -units::from_mhz(1);
  return c;
}

template <class Kernel>
void trace_kernel(benchmark::State& state, Kernel kernel) {
  const HamiltonianMatrix h =
      build_interaction_hamiltonian(couplings(), Detunings::resonant_pair(units::from_mhz(20)));
  const QuantumState psi = QuantumState::basis(h.labels, 0);
  const std::vector<double> grid = uniform_grid(0.0, 5e-6, static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(kernel(h, psi, grid, ""));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

template <class Kernel>
void scan_kernel(benchmark::State& state, Kernel kernel) {
  const std::vector<double> deltas{units::from_mhz(5),  units::from_mhz(10), units::from_mhz(20),
                                   units::from_mhz(40), units::from_mhz(80), units::from_mhz(160)};
  for (auto _ : state) benchmark::DoNotOptimize(kernel(couplings(), deltas, 2001));
}

void BM_TraceParallel(benchmark::State& s) { trace_kernel(s, propagate_trace); }
void BM_TraceSerial(benchmark::State& s) { trace_kernel(s, propagate_trace_serial); }
void BM_ScanParallel(benchmark::State& s) { scan_kernel(s, elimination_error_scan); }
void BM_ScanSerial(benchmark::State& s) { scan_kernel(s, elimination_error_scan_serial); }

}  // namespace

BENCHMARK(BM_TraceParallel)->Arg(2001)->Arg(20001)->UseRealTime();
BENCHMARK(BM_TraceSerial)->Arg(2001)->Arg(20001)->UseRealTime();
BENCHMARK(BM_ScanParallel)->UseRealTime();
BENCHMARK(BM_ScanSerial)->UseRealTime();

BENCHMARK_MAIN();
