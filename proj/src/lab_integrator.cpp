// Lab-frame Schrodinger equation through Boost.Odeint's controlled
// Runge-Kutta-Fehlberg 7(8) stepper.
#include <algorithm>
#include <cmath>
#include <complex>
#include <sstream>
#include <stdexcept>
#include <vector>

#include <boost/numeric/odeint.hpp>

#include "esst/dynamics.hpp"
#include "esst/errors.hpp"

namespace esst {

namespace {

namespace ode = boost::numeric::odeint;

using State = std::vector<cplx>;

class Integrator {
 public:
  Integrator(const HamiltonianFunction& h_fun, const LabIntegratorOptions& opts)
      : h_fun_(h_fun), opts_(opts) {
    if (!(opts.tolerance > 0.0)) throw std::domain_error("integrator tolerance must be positive");
    if (opts.max_steps == 0) throw std::domain_error("max_steps must be positive");
  }

  // Integrates y from times.front() through every entry of `times`, calling
  // observe(index, state) at each one.
  template <class Observer>
  void run(State& y, const std::vector<double>& times, Observer&& observe, LabRunStats& stats) {
    auto rhs = [this, &stats](const State& x, State& dxdt, double t) {
      ++stats.rhs_evaluations;
      const HamiltonianMatrix h = h_fun_(t);
      const auto n = static_cast<Eigen::Index>(x.size());
      if (h.dimension() != n) throw std::domain_error("Hamiltonian dimension does not match the state");
      for (Eigen::Index i = 0; i < n; ++i) {
        cplx acc = 0.0;
        for (Eigen::Index j = 0; j < n; ++j) acc += h.h(i, j) * x[static_cast<std::size_t>(j)];
        dxdt[static_cast<std::size_t>(i)] = cplx{0.0, -1.0} * acc;
      }
    };
    std::size_t index = 0;
    auto observer = [&](const State& x, double) { observe(index++, x); };
    const double dt = initial_step(times.front(), times.back() - times.front());
    auto stepper = ode::make_controlled(opts_.tolerance, opts_.tolerance,
                                        ode::runge_kutta_fehlberg78<State>());
    try {
      stats.accepted_steps += ode::integrate_times(stepper, rhs, y, times.begin(), times.end(), dt,
                                                   observer, ode::max_step_checker(opts_.max_steps));
    } catch (const ode::odeint_error& e) {
      std::ostringstream msg;
      msg << "lab integrator failed near observation " << index << ": " << e.what();
      throw NumericalFailure(msg.str());
    }
  }

 private:
  double initial_step(double t, double span) const {
    if (opts_.initial_step > 0.0) return opts_.initial_step;
    const HamiltonianMatrix h = h_fun_(t);
    const double scale = std::max(h.h.cwiseAbs().rowwise().sum().maxCoeff(), 1e-300);
    return std::max(std::min(span, 0.1 / scale), 1e-300);
  }

  const HamiltonianFunction& h_fun_;
  LabIntegratorOptions opts_;
};

void check_state(const QuantumState& psi0) {
  if (psi0.amplitudes.size() == 0) throw std::domain_error("empty initial state");
  if (std::abs(psi0.norm() - 1.0) > 1e-9) throw std::domain_error("initial state is not normalized");
}

State to_state(const Eigen::VectorXcd& v) { return State(v.data(), v.data() + v.size()); }

Eigen::VectorXcd to_vector(const State& s) {
  return Eigen::Map<const Eigen::VectorXcd>(s.data(), static_cast<Eigen::Index>(s.size()));
}

}  // namespace

PopulationTrace propagate_lab(const HamiltonianFunction& h_fun, const QuantumState& psi0,
                              std::span<const double> grid, const LabIntegratorOptions& opts,
                              LabRunStats* stats, const std::string& enantiomer) {
  check_state(psi0);
  if (grid.empty()) throw std::domain_error("time grid is empty");
  for (std::size_t i = 1; i < grid.size(); ++i) {
    if (!(grid[i] > grid[i - 1])) throw std::domain_error("time grid must be strictly increasing");
  }

  PopulationTrace trace;
  trace.times.assign(grid.begin(), grid.end());
  trace.labels = psi0.labels;
  trace.enantiomer = enantiomer;
  trace.populations.resize(static_cast<Eigen::Index>(grid.size()), psi0.amplitudes.size());

  LabRunStats local;
  State y = to_state(psi0.amplitudes);
  Integrator integrator(h_fun, opts);
  integrator.run(
      y, trace.times,
      [&](std::size_t i, const State& x) {
        const Eigen::VectorXcd v = to_vector(x);
        trace.populations.row(static_cast<Eigen::Index>(i)) = v.cwiseAbs2().transpose();
        local.max_norm_drift = std::max(local.max_norm_drift, std::abs(v.norm() - 1.0));
      },
      local);

  double worst = 0.0;
  for (Eigen::Index r = 0; r < trace.populations.rows(); ++r) {
    worst = std::max(worst, std::abs(trace.populations.row(r).sum() - 1.0));
  }
  trace.max_norm_residual = worst;
  if (stats) *stats = local;
  return trace;
}

QuantumState evolve_lab(const HamiltonianFunction& h_fun, const QuantumState& psi0, double t0,
                        double t1, const LabIntegratorOptions& opts, LabRunStats* stats) {
  check_state(psi0);
  if (!(t1 >= t0)) throw std::domain_error("evolve_lab needs t1 >= t0");
  LabRunStats local;
  State y = to_state(psi0.amplitudes);
  if (t1 > t0) {
    Integrator integrator(h_fun, opts);
    integrator.run(y, {t0, t1}, [](std::size_t, const State&) {}, local);
  }
  const Eigen::VectorXcd out = to_vector(y);
  local.max_norm_drift = std::abs(out.norm() - 1.0);
  if (stats) *stats = local;
  return {out, psi0.labels};
}

}  // namespace esst
