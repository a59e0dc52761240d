#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "esst/model.hpp"

namespace esst {

/// State vector over a labeled basis.
struct QuantumState {
  Eigen::VectorXcd amplitudes;
  std::vector<std::string> labels;

  /// Unit vector on basis element `index`.
  static QuantumState basis(const std::vector<std::string>& labels, Eigen::Index index);

  double norm() const { return amplitudes.norm(); }
  Eigen::VectorXd populations() const { return amplitudes.cwiseAbs2(); }
};

/// Occupation probabilities sampled on a time grid for one enantiomer.
///
/// Probabilities are stored raw; writers clamp to [0, 1] at output.
struct PopulationTrace {
  std::vector<double> times;
  std::vector<std::string> labels;
  /// rows = time points, cols = labels
  Eigen::MatrixXd populations;
  std::string enantiomer;
  /// max over rows of |sum(row) - 1|
  double max_norm_residual = 0.0;

  std::vector<double> column(const std::string& label) const;
  Eigen::Index label_index(const std::string& label) const;
};

/// exp(-i H t) applied through a Hermitian eigendecomposition computed once.
class SpectralPropagator {
 public:
  explicit SpectralPropagator(const HamiltonianMatrix& h);

  QuantumState apply(const QuantumState& psi0, double t) const;
  const Eigen::VectorXd& eigenvalues() const { return eigenvalues_; }

 private:
  Eigen::VectorXd eigenvalues_;
  Eigen::MatrixXcd eigenvectors_;
  std::vector<std::string> labels_;
};

/// exp(-i H t)|psi0>. Throws std::domain_error on dimension mismatch or an
/// unnormalized initial state.
QuantumState propagate(const HamiltonianMatrix& h, const QuantumState& psi0, double t);

/// Populations on `grid` (strictly increasing, nonempty). Grid points are
/// evaluated in parallel with OpenMP; each point is independent, so results
/// do not depend on the thread count.
PopulationTrace propagate_trace(const HamiltonianMatrix& h, const QuantumState& psi0,
                                std::span<const double> grid, const std::string& enantiomer = "");

/// Serial reference for propagate_trace: calls propagate() at every point.
PopulationTrace propagate_trace_serial(const HamiltonianMatrix& h, const QuantumState& psi0,
                                       std::span<const double> grid,
                                       const std::string& enantiomer = "");

/// Uniform grid of `points` samples on [t0, t1].
std::vector<double> uniform_grid(double t0, double t1, std::size_t points);

struct LabIntegratorOptions {
  /// Absolute and relative local error bound per step.
  double tolerance = 1e-10;
  /// Initial step; 0 picks one from the Hamiltonian scale.
  double initial_step = 0.0;
  /// Most steps allowed between two consecutive grid points.
  std::size_t max_steps = 10'000'000;
};

struct LabRunStats {
  std::size_t accepted_steps = 0;
  std::size_t rhs_evaluations = 0;
  /// max | |psi(t)| - 1 | at the grid points, not corrected.
  double max_norm_drift = 0.0;
};

using HamiltonianFunction = std::function<HamiltonianMatrix(double)>;

/// Integrates i d/dt psi = H(t) psi with an adaptive Runge-Kutta-Fehlberg
/// 7(8) pair, stepping exactly onto each grid point. Throws NumericalFailure
/// when the step control cannot make progress or max_steps is exceeded.
PopulationTrace propagate_lab(const HamiltonianFunction& h_fun, const QuantumState& psi0,
                              std::span<const double> grid, const LabIntegratorOptions& opts = {},
                              LabRunStats* stats = nullptr, const std::string& enantiomer = "");

/// Same integrator returning the final state only (used for norm studies).
QuantumState evolve_lab(const HamiltonianFunction& h_fun, const QuantumState& psi0, double t0,
                        double t1, const LabIntegratorOptions& opts = {},
                        LabRunStats* stats = nullptr);

/// Generalized Rabi frequency sqrt(|O_q|^2 + (Lambda1 - Lambda2)^2 / 4).
double generalized_rabi(cplx omega_q, double lambda_diff);

/// P2(t) = |O_q / O~_q|^2 sin^2(O~_q t) for a start in |1>. Returns 0 when
/// both O_q and the shift difference vanish.
double rabi_population(cplx omega_q, double lambda_diff, double t);

/// T_q = pi / O~_q; infinity when O~_q = 0.
double rabi_period(cplx omega_q, double lambda_diff);

}  // namespace esst
