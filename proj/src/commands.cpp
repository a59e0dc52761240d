#include "esst/commands.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <numbers>
#include <ostream>

#include "esst/angular.hpp"
#include "esst/errors.hpp"
#include "esst/output.hpp"
#include "esst/scan.hpp"
#include "esst/trace_analysis.hpp"
#include "esst/units.hpp"

namespace esst {

using json = nlohmann::ordered_json;

namespace {

double r12(double v) { return round_significant(v); }

json mhz(double w) { return r12(units::to_mhz(w)); }

json complex_mhz(cplx w) {
  return json{{"re", r12(units::to_mhz(w.real()))}, {"im", r12(units::to_mhz(w.imag()))}};
}

json couplings_json(const CouplingSet& c) {
  return json{{"omega21", complex_mhz(c.omega21)},   {"omega3p1", complex_mhz(c.omega3p1)},
              {"omega3p2", complex_mhz(c.omega3p2)}, {"omega3m1", complex_mhz(c.omega3m1)},
              {"omega3m2", complex_mhz(c.omega3m2)}};
}

json effective_json(const EffectiveParams& e) {
  return json{{"lambda1_mhz", mhz(e.lambda1)},
              {"lambda2_mhz", mhz(e.lambda2)},
              {"omega_eff_mhz", complex_mhz(e.omega_eff)},
              {"omega_eff_prime_mhz", complex_mhz(e.omega_eff_prime)}};
}

json solution_json(const ProtocolSolution& s) {
  json j{{"mode", to_string(s.mode)}, {"omega21_over_omega_eff", r12(s.omega21_over_omega_eff)}};
  if (s.mode == ProtocolMode::WayOneKeepL || s.mode == ProtocolMode::WayOneKeepR) {
    j["n"] = s.n;
  } else {
    j["n_l"] = s.n_l;
    j["n_r"] = s.n_r;
    j["requested_n_l"] = s.requested_n_l;
    j["requested_n_r"] = s.requested_n_r;
  }
  j["omega_eff_mhz"] = complex_mhz(s.omega_eff);
  j["omega21_mhz"] = complex_mhz(s.omega21);
  j["transfer_time_s"] = r12(s.transfer_time);
  j["predicted_p2_L"] = r12(s.predicted_p2_l);
  j["predicted_p2_R"] = r12(s.predicted_p2_r);
  return j;
}

json adjustment_json(const FieldAdjustment& a) {
  return json{{"amplitude12_mhz", mhz(a.amplitude12)},
              {"phase12_rad", r12(a.phase12)},
              {"achieved_omega21_mhz", complex_mhz(a.achieved_omega21)}};
}

json fidelity_json(const FidelityReport& f) {
  json j{{"transfer_time_s", r12(f.transfer_time)},
         {"p2_L", r12(f.p2_l)},
         {"p2_R", r12(f.p2_r)},
         {"discrimination", r12(f.discrimination)},
         {"peak_p2_L", r12(f.peak_p2_l)},
         {"peak_p2_R", r12(f.peak_p2_r)},
         {"analytic_peak_L", r12(f.analytic_peak_l)},
         {"analytic_peak_R", r12(f.analytic_peak_r)}};
  if (f.full) {
    j["full_model"] = json{{"p2_L", r12(f.full->p2_l)},
                           {"p2_R", r12(f.full->p2_r)},
                           {"discrimination", r12(f.full->discrimination)},
                           {"discrimination_drop", r12(f.full->discrimination_drop)},
                           {"r1", r12(f.full->hierarchy.r1)},
                           {"r2", r12(f.full->hierarchy.r2)}};
  } else {
    j["full_model"] = nullptr;
  }
  return j;
}

bool can_eliminate(const Detunings& det) { return det.delta12() == 0.0 && det.delta() != 0.0; }

ProtocolSolution design(const ProtocolSettings& p, cplx omega_eff) {
  switch (*p.mode) {
    case ProtocolMode::WayOneKeepL:
      return design_way_one(Chirality::L, omega_eff, p.n);
    case ProtocolMode::WayOneKeepR:
      return design_way_one(Chirality::R, omega_eff, p.n);
    case ProtocolMode::WayTwo:
      return design_way_two(p.n_l, p.n_r, omega_eff);
    case ProtocolMode::WayTwoMirrored:
      return design_way_two_mirrored(p.n_l, p.n_r, omega_eff);
  }
  throw std::logic_error("unhandled protocol mode");
}

std::vector<Chirality> selected(EnantiomerSelection s) {
  switch (s) {
    case EnantiomerSelection::L:
      return {Chirality::L};
    case EnantiomerSelection::R:
      return {Chirality::R};
    case EnantiomerSelection::Both:
      break;
  }
  return {Chirality::L, Chirality::R};
}

/// One enantiomer's dynamics under the configured model.
class ModelRunner {
 public:
  ModelRunner(const ResolvedRun& run, Chirality q) : run_(run), q_(q) {
    const RunConfig& cfg = run.config;
    switch (cfg.simulation.model) {
      case ModelKind::Effective:
        h_ = build_two_level(*run.effective, run.couplings_l.omega21, q);
        break;
      case ModelKind::Full:
        h_ = build_interaction_hamiltonian(run.couplings(q), cfg.detunings());
        break;
      case ModelKind::Lab:
        break;
    }
  }

  bool lab() const { return run_.config.simulation.model == ModelKind::Lab; }

  QuantumState initial() const {
    return QuantumState::basis(lab() ? four_level_labels() : h_.labels, 0);
  }

  PopulationTrace trace(std::span<const double> grid, LabRunStats* stats) const {
    const double t0 = run_.config.simulation.t_start;
    if (lab()) {
      return propagate_lab(lab_hamiltonian(), initial(), grid, lab_options(), stats,
                           to_string(q_));
    }
    // The state is |1> at t_start; spectral propagation runs on elapsed time.
    std::vector<double> elapsed(grid.begin(), grid.end());
    for (double& t : elapsed) t -= t0;
    PopulationTrace tr = propagate_trace(h_, initial(), elapsed, to_string(q_));
    tr.times.assign(grid.begin(), grid.end());
    return tr;
  }

  /// State after `elapsed` time from |1> at t_start.
  QuantumState state_after(double elapsed) const {
    if (lab()) {
      const double t0 = run_.config.simulation.t_start;
      return evolve_lab(lab_hamiltonian(), initial(), t0, t0 + elapsed, lab_options());
    }
    return propagate(h_, initial(), elapsed);
  }

 private:
  HamiltonianFunction lab_hamiltonian() const {
    const LevelFrequencies levels = run_.config.lab_levels();
    const CarrierFrequencies carriers = run_.config.carriers();
    const CouplingSet c = run_.couplings(q_);
    return [levels, carriers, c](double t) { return build_lab_hamiltonian(levels, c, carriers, t); };
  }

  LabIntegratorOptions lab_options() const {
    LabIntegratorOptions o;
    o.tolerance = run_.config.simulation.tolerance;
    return o;
  }

  const ResolvedRun& run_;
  Chirality q_;
  HamiltonianMatrix h_;
};

struct EnantiomerRun {
  PopulationTrace trace;
  LabRunStats lab_stats;
  std::optional<double> p2_at_transfer;
  double norm_at_transfer = 1.0;
};

json trace_summary(const PopulationTrace& tr, const CsvStats& csv, const LabRunStats* lab) {
  const std::vector<double> p2 = tr.column("2");
  const auto peak = std::max_element(p2.begin(), p2.end());
  const auto i_peak = static_cast<std::size_t>(peak - p2.begin());
  json extrema = json::array();
  // A flat trace has only round-off wiggles; report no extrema for it.
  const auto [lo, hi] = std::minmax_element(p2.begin(), p2.end());
  const bool flat = *hi - *lo < 1e-6;
  for (const Extremum& e : flat ? std::vector<Extremum>{} : find_extrema(tr.times, p2)) {
    extrema.push_back(json{{"t_s", r12(e.time)},
                           {"p2", r12(std::clamp(e.value, 0.0, 1.0))},
                           {"kind", e.maximum ? "max" : "min"}});
  }
  const std::optional<double> period = estimate_period(tr.times, p2);
  json j{{"peak_p2", r12(std::clamp(*peak, 0.0, 1.0))},
         {"peak_time_s", r12(tr.times[i_peak])},
         {"final_p2", r12(std::clamp(p2.back(), 0.0, 1.0))},
         {"period_s", period ? json(r12(*period)) : json(nullptr)},
         {"extrema", extrema},
         {"max_norm_residual", r12(tr.max_norm_residual)},
         {"clamped_samples", csv.clamped},
         {"max_clamp", r12(csv.max_clamp)}};
  if (lab) {
    j["integrator"] = json{{"accepted_steps", lab->accepted_steps},
                           {"rhs_evaluations", lab->rhs_evaluations},
                           {"max_norm_drift", r12(lab->max_norm_drift)}};
  }
  return j;
}

template <class Fn>
int guarded(std::ostream& err, Fn&& fn) {
  try {
    return fn();
  } catch (const ConfigError& e) {
    err << "validation error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const NumericalFailure& e) {
    err << "numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const std::domain_error& e) {
    err << "validation error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitValidation;
  }
}

}  // namespace

ResolvedRun resolve_run(const RunConfig& config) {
  ResolvedRun run{config, config.fields, std::nullopt, std::nullopt, {}, {}, std::nullopt};
  const Detunings det = config.detunings();
  const DipoleModel& dip = config.dipoles;

  if (config.protocol.mode) {
    if (!can_eliminate(det)) {
      throw ConfigError("[protocol] mode",
                        "protocols need field_12 on resonance and a nonzero 2-3/1-3 detuning");
    }
    const EffectiveParams eff = adiabatic_eliminate(build_coupling_set(run.fields, dip, Chirality::L),
                                                    det);
    try {
      run.protocol = design(config.protocol, eff.omega_eff);
      run.adjustment = adjust_field12(run.fields, dip, run.protocol->omega21);
    } catch (const std::domain_error& e) {
      throw ConfigError("[protocol]", e.what());
    }
    run.fields.f12.amplitude = run.adjustment->amplitude12;
    run.fields.f12.phase = run.adjustment->phase12;
  }

  run.couplings_l = build_coupling_set(run.fields, dip, Chirality::L);
  run.couplings_r = build_coupling_set(run.fields, dip, Chirality::R);
  if (can_eliminate(det)) run.effective = adiabatic_eliminate(run.couplings_l, det);
  if (config.simulation.model == ModelKind::Effective && !run.effective) {
    throw ConfigError("[simulation] model",
                      "the effective model needs field_12 on resonance and a nonzero shared "
                      "detuning");
  }
  return run;
}

SimulationResult run_simulation(const RunConfig& config) {
  SimulationResult result{resolve_run(config), {}, {}, {}};
  const ResolvedRun& run = result.run;
  const SimulationSettings& sim = config.simulation;
  const std::vector<double> grid = uniform_grid(sim.t_start, sim.t_end, sim.points);
  const std::vector<Chirality> qs = selected(sim.enantiomer);

  // The enantiomers are independent jobs.
  std::vector<EnantiomerRun> runs(qs.size());
  std::vector<std::exception_ptr> errors(qs.size());
  const auto n = static_cast<std::ptrdiff_t>(qs.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t k = 0; k < n; ++k) {
    const auto i = static_cast<std::size_t>(k);
    try {
      const ModelRunner runner(run, qs[i]);
      runs[i].trace = runner.trace(grid, &runs[i].lab_stats);
      if (run.protocol) {
        const QuantumState s = runner.state_after(run.protocol->transfer_time);
        runs[i].p2_at_transfer = std::norm(s.amplitudes(1));
        runs[i].norm_at_transfer = s.norm();
      }
    } catch (...) {
      errors[i] = std::current_exception();
    }
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);

  json& s = result.summary;
  s["metadata"] = json{{"version", kVersion}, {"command", "simulate"}, {"config", config.source}};

  const Detunings det = config.detunings();
  json params{{"model", to_string(sim.model)},
              {"enantiomer", to_string(sim.enantiomer)},
              {"t_start_s", r12(sim.t_start)},
              {"t_end_s", r12(sim.t_end)},
              {"points", sim.points},
              {"delta12_mhz", mhz(det.delta12())},
              {"delta23_mhz", mhz(det.delta23())},
              {"delta13_mhz", mhz(det.delta13())},
              {"field12",
               json{{"amplitude_mhz", mhz(run.fields.f12.amplitude)},
                    {"phase_rad", r12(run.fields.f12.phase)}}},
              {"couplings_L_mhz", couplings_json(run.couplings_l)},
              {"couplings_R_mhz", couplings_json(run.couplings_r)}};
  if (sim.model == ModelKind::Lab) {
    const LevelFrequencies lv = config.lab_levels();
    params["tolerance"] = r12(sim.tolerance);
    params["levels_mhz"] = json{{"omega1", mhz(lv.omega1)},
                                {"omega2", mhz(lv.omega2)},
                                {"omega3", mhz(lv.omega3)}};
  }
  if (run.effective) {
    params["effective"] = effective_json(*run.effective);
    const HierarchyDiagnostics hd = hierarchy_ratio(run.couplings_l, det.delta());
    params["hierarchy"] = json{{"r1", r12(hd.r1)}, {"r2", r12(hd.r2)}};
  }
  s["parameters"] = params;

  if (run.protocol) {
    json p = solution_json(*run.protocol);
    p["field_adjustment"] = adjustment_json(*run.adjustment);
    json at{{"elapsed_s", r12(run.protocol->transfer_time)}};
    std::optional<double> pl, pr;
    for (std::size_t i = 0; i < qs.size(); ++i) {
      const double p2 = std::clamp(*runs[i].p2_at_transfer, 0.0, 1.0);
      at["p2_" + to_string(qs[i])] = r12(p2);
      at["norm_residual_" + to_string(qs[i])] = r12(std::abs(runs[i].norm_at_transfer - 1.0));
      (qs[i] == Chirality::L ? pl : pr) = p2;
    }
    at["discrimination"] = pl && pr ? json(r12(std::abs(*pl - *pr))) : json(nullptr);
    p["at_transfer"] = at;
    s["protocol"] = p;
  } else {
    s["protocol"] = nullptr;
  }

  json traces;
  for (std::size_t i = 0; i < qs.size(); ++i) {
    CsvStats csv;
    std::string text = trace_csv(runs[i].trace, &csv);
    const std::string name = "trace_" + to_string(qs[i]) + ".csv";
    result.files.emplace_back(name, std::move(text));
    json t = trace_summary(runs[i].trace, csv,
                           sim.model == ModelKind::Lab ? &runs[i].lab_stats : nullptr);
    t["file"] = name;
    traces[to_string(qs[i])] = t;
  }
  s["enantiomers"] = traces;

  if (qs.size() == 2) {
    const std::vector<double> l = runs[0].trace.column("2");
    const std::vector<double> r = runs[1].trace.column("2");
    std::size_t best = 0;
    for (std::size_t i = 1; i < l.size(); ++i) {
      if (std::abs(l[i] - r[i]) > std::abs(l[best] - r[best])) best = i;
    }
    s["discrimination"] = json{{"max", r12(std::abs(l[best] - r[best]))},
                               {"time_s", r12(grid[best])}};
  } else {
    s["discrimination"] = nullptr;
  }

  result.files.emplace_back("summary.json", json_text(s));
  for (auto& tr : runs) result.traces.push_back(std::move(tr.trace));
  return result;
}

int cmd_simulate(const SimulateOptions& opts, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    RunConfig cfg = load_config(opts.config);
    if (opts.model) cfg.simulation.model = *opts.model;
    if (opts.enantiomer) cfg.simulation.enantiomer = *opts.enantiomer;
    const SimulationResult res = run_simulation(cfg);
    std::filesystem::create_directories(opts.out);
    std::vector<std::pair<std::filesystem::path, std::string>> files;
    for (const auto& [name, content] : res.files) files.emplace_back(opts.out / name, content);
    write_files_atomically(files);
    for (const auto& f : files) out << "wrote " << f.first.string() << "\n";
    return static_cast<int>(kExitOk);
  });
}

json run_design(const DesignOptions& opts) {
  ProtocolSettings p;
  if (opts.mode == "way_one") {
    if (!opts.keep) throw std::domain_error("way_one needs --keep L or --keep R");
    p.mode = parse_chirality(*opts.keep) == Chirality::L ? ProtocolMode::WayOneKeepL
                                                         : ProtocolMode::WayOneKeepR;
  } else {
    p.mode = parse_protocol_mode(opts.mode);
    if (opts.keep) throw std::domain_error("--keep only applies to way_one");
  }
  const bool way_one = *p.mode == ProtocolMode::WayOneKeepL || *p.mode == ProtocolMode::WayOneKeepR;
  for (int v : opts.integers) {
    if (v < 0) throw std::domain_error("cycle counts must be natural numbers");
  }
  if (way_one) {
    if (opts.integers.size() > 1) throw std::domain_error("way one takes a single integer N");
    p.n = opts.integers.empty() ? 0 : opts.integers[0];
  } else {
    if (opts.integers.size() != 2) throw std::domain_error("way two takes two integers N_L N_R");
    p.n_l = opts.integers[0];
    p.n_r = opts.integers[1];
  }
  if (opts.config && opts.omega_eff_mhz) {
    throw std::domain_error("give either a config or --omega-eff, not both");
  }

  json report{{"metadata", json{{"version", kVersion}, {"command", "design"}}}};
  if (opts.config) {
    RunConfig cfg = load_config(*opts.config);
    cfg.protocol = p;
    // The design is judged by its own transfer time, never by the model choice.
    cfg.simulation.model = ModelKind::Full;
    const ResolvedRun run = resolve_run(cfg);
    report["metadata"]["config"] = cfg.source;
    report["solution"] = solution_json(*run.protocol);
    report["field_adjustment"] = adjustment_json(*run.adjustment);
    report["effective"] = effective_json(*run.effective);
    const FullModelParams full{run.couplings_l, cfg.detunings().delta()};
    report["evaluation"] = fidelity_json(evaluate_protocol(*run.protocol, *run.effective, full));
  } else {
    if (!opts.omega_eff_mhz) throw std::domain_error("need --config or --omega-eff");
    const cplx omega_eff{units::from_mhz(*opts.omega_eff_mhz), 0.0};
    const ProtocolSolution sol = design(p, omega_eff);
    EffectiveParams eff;
    eff.omega_eff = omega_eff;
    report["solution"] = solution_json(sol);
    report["field_adjustment"] = nullptr;
    report["effective"] = effective_json(eff);
    report["evaluation"] = fidelity_json(evaluate_protocol(sol, eff));
  }
  return report;
}

int cmd_design(const DesignOptions& opts, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    out << json_text(run_design(opts));
    return static_cast<int>(kExitOk);
  });
}

namespace {

class CheckList {
 public:
  void add(const std::string& name, double residual, double tolerance, bool lower_is_better = true,
           const std::string& detail = "") {
    const bool ok = std::isfinite(residual) &&
                    (lower_is_better ? residual <= tolerance : residual >= tolerance);
    json c{{"name", name},
           {"passed", ok},
           {"residual", std::isfinite(residual) ? json(r12(residual)) : json(nullptr)},
           {"tolerance", r12(tolerance)},
           {"bound", lower_is_better ? "max" : "min"}};
    if (!detail.empty()) c["detail"] = detail;
    all_ok_ = all_ok_ && ok;
    checks_.push_back(std::move(c));
  }
  void fail(const std::string& name, const std::string& detail) {
    checks_.push_back(json{{"name", name}, {"passed", false}, {"detail", detail}});
    all_ok_ = false;
  }
  bool all_ok() const { return all_ok_; }
  const json& checks() const { return checks_; }

 private:
  json checks_ = json::array();
  bool all_ok_ = true;
};

double rel_diff(cplx a, cplx b) {
  const double scale = std::max({std::abs(a), std::abs(b), 1e-300});
  return std::abs(a - b) / scale;
}

/// Largest deviation from sum_{m1 m2} (2 j3 + 1) 3j(j1 j2 j3; m1 m2 m3)
/// 3j(j1 j2 j3'; m1 m2 m3') = delta_{j3 j3'} delta_{m3 m3'} for j <= max_two_j / 2.
double threej_orthogonality(int max_two_j) {
  double worst = 0.0;
  for (int a = 0; a <= max_two_j; ++a) {
    for (int b = 0; b <= max_two_j; ++b) {
      for (int c = std::abs(a - b); c <= std::min(a + b, max_two_j); c += 2) {
        for (int cp = std::abs(a - b); cp <= std::min(a + b, max_two_j); cp += 2) {
          for (int mc = -c; mc <= c; mc += 2) {
            for (int mcp = -cp; mcp <= cp; mcp += 2) {
              double sum = 0.0;
              for (int ma = -a; ma <= a; ma += 2) {
                const int mb = -mc - ma;
                const int mbp = -mcp - ma;
                if (std::abs(mb) > b || std::abs(mbp) > b || mb != mbp) continue;
                sum += wigner_3j(ThreeJArgs::doubled(a, b, c, ma, mb, mc)) *
                       wigner_3j(ThreeJArgs::doubled(a, b, cp, ma, mbp, mcp));
              }
              sum *= c + 1;
              const double expect = (c == cp && mc == mcp) ? 1.0 : 0.0;
              worst = std::max(worst, std::abs(sum - expect));
            }
          }
        }
      }
    }
  }
  return worst;
}

/// Largest violation of the column-permutation and sign-reversal symmetries.
double threej_symmetry(int max_two_j) {
  double worst = 0.0;
  for (int a = 0; a <= max_two_j; ++a) {
    for (int b = 0; b <= max_two_j; ++b) {
      for (int c = std::abs(a - b); c <= std::min(a + b, max_two_j); c += 2) {
        const int phase = ((a + b + c) / 2) % 2 == 0 ? 1 : -1;
        for (int ma = -a; ma <= a; ma += 2) {
          for (int mb = -b; mb <= b; mb += 2) {
            const int mc = -ma - mb;
            if (std::abs(mc) > c) continue;
            const double w = wigner_3j(ThreeJArgs::doubled(a, b, c, ma, mb, mc));
            const double cyc = wigner_3j(ThreeJArgs::doubled(b, c, a, mb, mc, ma));
            const double swp = wigner_3j(ThreeJArgs::doubled(b, a, c, mb, ma, mc));
            const double neg = wigner_3j(ThreeJArgs::doubled(a, b, c, -ma, -mb, -mc));
            worst = std::max({worst, std::abs(w - cyc), std::abs(w - phase * swp),
                              std::abs(w - phase * neg)});
          }
        }
      }
    }
  }
  return worst;
}

double wrapped_distance_to_pi(double diff) {
  double d = std::remainder(diff - std::numbers::pi, 2.0 * std::numbers::pi);
  return std::abs(d);
}

}  // namespace

json run_verify(const RunConfig& config) {
  CheckList checks;
  const DipoleModel& dip = config.dipoles;

  checks.add("threej_orthogonality", threej_orthogonality(6), 1e-12);
  checks.add("threej_symmetry", threej_symmetry(6), 1e-14);

  // Every working-set leg obeys the rotor selection rules.
  {
    const RotationalKet k1{0, 0, 0}, k2{1, 0, -1}, k3p{1, 1, 0}, k3m{1, -1, 0};
    const bool ok = dipole_transition_allowed(k1, k2, -1, 0) &&
                    dipole_transition_allowed(k2, k3p, +1, +1) &&
                    dipole_transition_allowed(k2, k3m, +1, -1) &&
                    dipole_transition_allowed(k1, k3p, 0, +1) &&
                    dipole_transition_allowed(k1, k3m, 0, -1) &&
                    !dipole_transition_allowed(k1, k2, 0, 0);
    checks.add("selection_rules", ok ? 0.0 : 1.0, 0.0);
  }
  {
    const double ep = rotational_energy(config.rotor, {1, 1, 0});
    const double em = rotational_energy(config.rotor, {1, -1, 0});
    checks.add("k_degeneracy", std::abs(ep - em) / std::max(std::abs(ep), 1.0), 0.0);
  }
  {
    const WorkingSetReport ws =
        validate_working_set(dip.label(1, Chirality::L), dip.label(2, Chirality::L),
                             dip.label(3, Chirality::L));
    if (ws.all_passed()) {
      checks.add("working_set", 0.0, 0.0);
    } else {
      checks.fail("working_set", ws.failures());
    }
  }

  ResolvedRun run = resolve_run(config);
  const Detunings det = config.detunings();

  {
    double worst = 0.0;
    for (Chirality q : {Chirality::L, Chirality::R}) {
      auto lvl = [&](WorkingState s) { return working_level(s, dip, q); };
      const CouplingSet& c = run.couplings(q);
      const Level l1 = lvl(WorkingState::One), l2 = lvl(WorkingState::Two);
      const Level l3p = lvl(WorkingState::ThreePlus), l3m = lvl(WorkingState::ThreeMinus);
      worst = std::max({worst, rel_diff(c.omega21, coupling_general(run.fields.f12, l2, l1, dip)),
                        rel_diff(c.omega3p2, coupling_general(run.fields.f23, l3p, l2, dip)),
                        rel_diff(c.omega3m2, coupling_general(run.fields.f23, l3m, l2, dip)),
                        rel_diff(c.omega3p1, coupling_general(run.fields.f13, l3p, l1, dip)),
                        rel_diff(c.omega3m1, coupling_general(run.fields.f13, l3m, l1, dip))});
    }
    checks.add("coupling_closed_forms", worst, 1e-12);
  }

  {
    const CouplingSet& l = run.couplings_l;
    const CouplingSet& r = run.couplings_r;
    const bool all_nonzero = l.omega21 != cplx{} && l.omega3p1 != cplx{} &&
                             l.omega3p2 != cplx{} && l.omega3m1 != cplx{} && l.omega3m2 != cplx{};
    if (!all_nonzero) {
      checks.fail("loop_phase_pi", "a loop coupling is zero, so the loop phase is undefined");
    } else {
      const double dp = wrapped_distance_to_pi(loop_phase(l, true) - loop_phase(r, true));
      const double dm = wrapped_distance_to_pi(loop_phase(l, false) - loop_phase(r, false));
      checks.add("loop_phase_pi", std::max(dp, dm), 1e-12);
    }
    const double others = std::max({std::abs(l.omega3p1 - r.omega3p1), std::abs(l.omega3p2 - r.omega3p2),
                                     std::abs(l.omega3m1 - r.omega3m1), std::abs(l.omega3m2 - r.omega3m2)});
    const double flip = std::abs(l.omega21 + r.omega21);
    checks.add("only_omega21_changes", std::max(others, flip), 0.0);
  }

  {
    double worst = 0.0;
    for (Chirality q : {Chirality::L, Chirality::R}) {
      worst = std::max(worst, build_interaction_hamiltonian(run.couplings(q), det).hermiticity_residual());
      worst = std::max(worst, build_lab_hamiltonian(config.lab_levels(), run.couplings(q),
                                                    config.carriers(), 0.37e-6)
                                  .hermiticity_residual());
      if (run.effective) {
        worst = std::max(worst, build_two_level(*run.effective, run.couplings_l.omega21, q)
                                    .hermiticity_residual());
      }
    }
    checks.add("hermiticity", worst, 1e-14);
  }

  {
    const double span = config.simulation.t_end - config.simulation.t_start;
    double drift = 0.0, back = 0.0;
    for (Chirality q : {Chirality::L, Chirality::R}) {
      const HamiltonianMatrix h = build_interaction_hamiltonian(run.couplings(q), det);
      const QuantumState psi0 = QuantumState::basis(h.labels, 0);
      const QuantumState fwd = propagate(h, psi0, span);
      const QuantumState ret = propagate(h, fwd, -span);
      drift = std::max(drift, std::abs(fwd.norm() - 1.0));
      back = std::max(back, (ret.amplitudes - psi0.amplitudes).norm());
    }
    checks.add("norm_conservation", drift, 1e-9);
    checks.add("time_reversal", back, 1e-10);
  }

  json scan_json = nullptr;
  if (det.delta12() != 0.0) {
    checks.fail("elimination_scaling", "needs field_12 on resonance");
  } else {
    const EliminationScan scan = elimination_error_scan(run.couplings_l, config.verify_ladder);
    scan_json = json::array();
    for (const auto& p : scan.points) {
      scan_json.push_back(json{{"delta_mhz", mhz(p.delta)},
                               {"error", r12(p.error())},
                               {"error_L", r12(p.error_l)},
                               {"error_R", r12(p.error_r)},
                               {"r1", r12(p.r1)}});
    }
    const double min_ratio = *std::min_element(scan.ratios.begin(), scan.ratios.end());
    checks.add("elimination_scaling", min_ratio, 3.5, false,
               "smallest error ratio per ladder step");
  }

  json report{{"metadata", json{{"version", kVersion}, {"command", "verify"}, {"config", config.source}}},
              {"all_passed", checks.all_ok()},
              {"checks", checks.checks()},
              {"elimination_scan", scan_json}};
  return report;
}

int cmd_verify(const VerifyOptions& opts, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const RunConfig cfg = load_config(opts.config);
    const json report = run_verify(cfg);
    const std::string text = json_text(report);
    if (!opts.out.empty()) {
      std::filesystem::create_directories(opts.out);
      write_files_atomically({{opts.out / "verify.json", text}});
    }
    out << text;
    if (!report["all_passed"].get<bool>()) {
      err << "verification failed\n";
      return static_cast<int>(kExitNumerical);
    }
    return static_cast<int>(kExitOk);
  });
}

}  // namespace esst
