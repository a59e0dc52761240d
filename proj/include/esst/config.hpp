#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "esst/drive.hpp"
#include "esst/model.hpp"
#include "esst/protocol.hpp"
#include "esst/rotor.hpp"

namespace esst {

/// Malformed or inconsistent run configuration. `where` is "file:line" for
/// syntax errors and "[section] key" for validation errors.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string where, const std::string& message)
      : std::runtime_error(where + ": " + message), where_(std::move(where)) {}
  const std::string& where() const { return where_; }

 private:
  std::string where_;
};

enum class ModelKind { Effective, Full, Lab };
enum class EnantiomerSelection { L, R, Both };

std::string to_string(ModelKind m);
ModelKind parse_model_kind(const std::string& s);
std::string to_string(EnantiomerSelection e);
EnantiomerSelection parse_enantiomer_selection(const std::string& s);

struct SimulationSettings {
  ModelKind model = ModelKind::Effective;
  EnantiomerSelection enantiomer = EnantiomerSelection::Both;
  double t_start = 0.0;  // s
  double t_end = 0.0;    // s
  std::size_t points = 1001;
  double tolerance = 1e-10;
};

struct ProtocolSettings {
  std::optional<ProtocolMode> mode;
  int n = 0;
  int n_l = 0;
  int n_r = 0;
};

/// Validated contents of a run-config file. Frequencies are stored in rad/s,
/// times in seconds.
struct RunConfig {
  std::string source;
  RotorConstants rotor = RotorConstants::prolate(2.0, 1.0);
  DipoleModel dipoles{{}};
  FieldTriple fields;
  /// False when [field_12] leaves amplitude and phase to the protocol designer.
  bool field12_specified = true;
  double delta12 = 0.0;
  double delta23 = 0.0;
  double delta13 = 0.0;
  /// Explicit lab-frame level frequencies; rotor energies are used otherwise.
  std::optional<LevelFrequencies> levels;
  SimulationSettings simulation;
  ProtocolSettings protocol;
  /// Detunings (rad/s) for the elimination-error scan of `verify`.
  std::vector<double> verify_ladder;

  Detunings detunings() const { return {delta12, delta13, delta23}; }
  /// Level frequencies for the lab-frame model.
  LevelFrequencies lab_levels() const;
  CarrierFrequencies carriers() const;
};

/// Parses the sectioned key-value format. Throws ConfigError.
RunConfig parse_config(std::istream& in, const std::string& source = "<config>");
RunConfig load_config(const std::filesystem::path& path);

}  // namespace esst
