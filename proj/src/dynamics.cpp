#include "esst/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include <Eigen/Eigenvalues>

namespace esst {

namespace {

void check_initial_state(const HamiltonianMatrix& h, const QuantumState& psi0) {
  if (h.h.rows() != h.h.cols()) throw std::domain_error("Hamiltonian is not square");
  if (psi0.amplitudes.size() != h.dimension()) {
    throw std::domain_error("state dimension " + std::to_string(psi0.amplitudes.size()) +
                            " does not match Hamiltonian dimension " +
                            std::to_string(h.dimension()));
  }
  if (std::abs(psi0.norm() - 1.0) > 1e-9) throw std::domain_error("initial state is not normalized");
}

void check_grid(std::span<const double> grid) {
  if (grid.empty()) throw std::domain_error("time grid is empty");
  for (std::size_t i = 1; i < grid.size(); ++i) {
    if (!(grid[i] > grid[i - 1])) throw std::domain_error("time grid must be strictly increasing");
  }
}

PopulationTrace empty_trace(std::span<const double> grid, const std::vector<std::string>& labels,
                            const std::string& enantiomer) {
  PopulationTrace trace;
  trace.times.assign(grid.begin(), grid.end());
  trace.labels = labels;
  trace.enantiomer = enantiomer;
  trace.populations.resize(static_cast<Eigen::Index>(grid.size()),
                           static_cast<Eigen::Index>(labels.size()));
  return trace;
}

void finish_residual(PopulationTrace& trace) {
  double worst = 0.0;
  for (Eigen::Index r = 0; r < trace.populations.rows(); ++r) {
    worst = std::max(worst, std::abs(trace.populations.row(r).sum() - 1.0));
  }
  trace.max_norm_residual = worst;
}

}  // namespace

QuantumState QuantumState::basis(const std::vector<std::string>& labels, Eigen::Index index) {
  if (index < 0 || index >= static_cast<Eigen::Index>(labels.size())) {
    throw std::domain_error("basis index out of range");
  }
  QuantumState s;
  s.amplitudes = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(labels.size()));
  s.amplitudes(index) = 1.0;
  s.labels = labels;
  return s;
}

std::vector<double> PopulationTrace::column(const std::string& label) const {
  const Eigen::Index c = label_index(label);
  std::vector<double> out(static_cast<std::size_t>(populations.rows()));
  for (Eigen::Index r = 0; r < populations.rows(); ++r) out[static_cast<std::size_t>(r)] = populations(r, c);
  return out;
}

Eigen::Index PopulationTrace::label_index(const std::string& label) const {
  const auto it = std::find(labels.begin(), labels.end(), label);
  if (it == labels.end()) throw std::domain_error("trace has no column '" + label + "'");
  return it - labels.begin();
}

SpectralPropagator::SpectralPropagator(const HamiltonianMatrix& h) : labels_(h.labels) {
  if (h.h.rows() != h.h.cols()) throw std::domain_error("Hamiltonian is not square");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(h.h);
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error("Hermitian eigendecomposition failed");
  }
  eigenvalues_ = solver.eigenvalues();
  eigenvectors_ = solver.eigenvectors();
}

QuantumState SpectralPropagator::apply(const QuantumState& psi0, double t) const {
  const Eigen::VectorXcd coeffs = eigenvectors_.adjoint() * psi0.amplitudes;
  Eigen::VectorXcd phased(coeffs.size());
  for (Eigen::Index i = 0; i < coeffs.size(); ++i) {
    phased(i) = coeffs(i) * std::polar(1.0, -eigenvalues_(i) * t);
  }
  return {eigenvectors_ * phased, psi0.labels.empty() ? labels_ : psi0.labels};
}

QuantumState propagate(const HamiltonianMatrix& h, const QuantumState& psi0, double t) {
  check_initial_state(h, psi0);
  if (t == 0.0) return psi0;
  return SpectralPropagator(h).apply(psi0, t);
}

PopulationTrace propagate_trace(const HamiltonianMatrix& h, const QuantumState& psi0,
                                std::span<const double> grid, const std::string& enantiomer) {
  check_initial_state(h, psi0);
  check_grid(grid);
  const SpectralPropagator prop(h);
  PopulationTrace trace = empty_trace(grid, h.labels, enantiomer);
  const auto n = static_cast<std::ptrdiff_t>(grid.size());

#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const double t = grid[static_cast<std::size_t>(i)];
    const QuantumState psi = t == 0.0 ? psi0 : prop.apply(psi0, t);
    trace.populations.row(i) = psi.populations().transpose();
  }
  finish_residual(trace);
  return trace;
}

PopulationTrace propagate_trace_serial(const HamiltonianMatrix& h, const QuantumState& psi0,
                                       std::span<const double> grid,
                                       const std::string& enantiomer) {
  check_initial_state(h, psi0);
  check_grid(grid);
  PopulationTrace trace = empty_trace(grid, h.labels, enantiomer);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    trace.populations.row(static_cast<Eigen::Index>(i)) =
        propagate(h, psi0, grid[i]).populations().transpose();
  }
  finish_residual(trace);
  return trace;
}

std::vector<double> uniform_grid(double t0, double t1, std::size_t points) {
  if (points < 2) throw std::domain_error("a time grid needs at least two points");
  if (!(t1 > t0)) throw std::domain_error("time span must be positive");
  std::vector<double> g(points);
  const double step = (t1 - t0) / static_cast<double>(points - 1);
  for (std::size_t i = 0; i < points; ++i) g[i] = t0 + step * static_cast<double>(i);
  g.back() = t1;
  return g;
}

double generalized_rabi(cplx omega_q, double lambda_diff) {
  return std::sqrt(std::norm(omega_q) + 0.25 * lambda_diff * lambda_diff);
}

double rabi_population(cplx omega_q, double lambda_diff, double t) {
  if (t < 0.0) throw std::domain_error("rabi_population needs t >= 0");
  const double w = generalized_rabi(omega_q, lambda_diff);
  if (w == 0.0) return 0.0;
  const double s = std::sin(w * t);
  return std::norm(omega_q) / (w * w) * s * s;
}

double rabi_period(cplx omega_q, double lambda_diff) {
  const double w = generalized_rabi(omega_q, lambda_diff);
  if (w == 0.0) return std::numeric_limits<double>::infinity();
  return std::numbers::pi / w;
}

}  // namespace esst
