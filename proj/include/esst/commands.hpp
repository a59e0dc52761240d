#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "esst/config.hpp"
#include "esst/dynamics.hpp"
#include "esst/model.hpp"
#include "esst/protocol.hpp"
#include "json.hpp"

namespace esst {

inline constexpr const char* kVersion = "esst 1.0.0";

/// Process exit statuses of the command-line tool.
enum ExitCode : int { kExitOk = 0, kExitValidation = 1, kExitNumerical = 2 };

/// A configuration with the protocol applied: final fields, the couplings of
/// both enantiomers and the eliminated parameters.
struct ResolvedRun {
  RunConfig config;
  FieldTriple fields;
  std::optional<ProtocolSolution> protocol;
  std::optional<FieldAdjustment> adjustment;
  CouplingSet couplings_l;
  CouplingSet couplings_r;
  /// Present when Delta12 = 0 and the shared detuning is nonzero.
  std::optional<EffectiveParams> effective;

  const CouplingSet& couplings(Chirality q) const {
    return q == Chirality::L ? couplings_l : couplings_r;
  }
};

/// Designs the configured protocol (if any) and retunes the 1-2 field for it.
/// Throws ConfigError when the configuration cannot support the request.
ResolvedRun resolve_run(const RunConfig& config);

struct SimulationResult {
  ResolvedRun run;
  std::vector<PopulationTrace> traces;
  nlohmann::ordered_json summary;
  /// File name -> content, ready to be written.
  std::vector<std::pair<std::string, std::string>> files;
};

/// Runs the configured model for the selected enantiomers and renders the
/// per-enantiomer CSV traces and the JSON summary. No I/O.
SimulationResult run_simulation(const RunConfig& config);

struct SimulateOptions {
  std::filesystem::path config;
  std::filesystem::path out;
  std::optional<ModelKind> model;
  std::optional<EnantiomerSelection> enantiomer;
};

int cmd_simulate(const SimulateOptions& opts, std::ostream& out, std::ostream& err);

struct DesignOptions {
  /// way_one (with keep), way_one_keep_L, way_one_keep_R, way_two, way_two_mirrored
  std::string mode;
  std::vector<int> integers;
  std::optional<std::string> keep;
  std::optional<std::filesystem::path> config;
  /// Omega_eff in 2pi x MHz, used when no config is given.
  std::optional<double> omega_eff_mhz;
};

/// Protocol report; throws std::domain_error / ConfigError on invalid input.
nlohmann::ordered_json run_design(const DesignOptions& opts);

int cmd_design(const DesignOptions& opts, std::ostream& out, std::ostream& err);

/// Runs the invariant checks on a configuration. The report holds one entry
/// per check with its measured residual and tolerance.
nlohmann::ordered_json run_verify(const RunConfig& config);

struct VerifyOptions {
  std::filesystem::path config;
  /// Directory for verify.json; stdout only when empty.
  std::filesystem::path out;
};

int cmd_verify(const VerifyOptions& opts, std::ostream& out, std::ostream& err);

}  // namespace esst
