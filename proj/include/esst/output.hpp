#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "esst/dynamics.hpp"
#include "json.hpp"

namespace esst {

/// Fixed 12-significant-digit rendering shared by CSV and JSON outputs.
std::string format_number(double v);

/// v rounded to 12 significant digits (the value format_number prints).
double round_significant(double v);

/// Column name of a basis label in the CSV header ("1" -> "p1", "3p" -> "p3p").
std::string population_column(const std::string& label);

struct CsvStats {
  /// Number of samples moved into [0, 1] by clamping.
  std::size_t clamped = 0;
  /// Largest distance of a raw sample from [0, 1].
  double max_clamp = 0.0;
};

/// CSV with header `t_s,<columns>`, LF endings, probabilities clamped to [0, 1].
std::string trace_csv(const PopulationTrace& trace, CsvStats* stats = nullptr);

/// Pretty-printed JSON with a trailing newline. Callers round numbers first.
std::string json_text(const nlohmann::ordered_json& j);

/// Writes every (path, content) pair or none of them: contents go to
/// temporary siblings first and are renamed into place once all writes
/// succeeded. Throws std::runtime_error on I/O failure.
void write_files_atomically(const std::vector<std::pair<std::filesystem::path, std::string>>& files);

}  // namespace esst
