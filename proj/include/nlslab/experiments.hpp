#pragma once

// Experiment configs, orchestration and persistence behind the nlslab CLI.

#include <filesystem>
#include <string>
#include <vector>

#include "nlslab/serialization.hpp"

namespace nlslab {

inline constexpr const char* kToolVersion = "nlslab 1.0.0";
inline constexpr int kConfigVersion = 1;

/// A config could not be parsed; carries 1-based line and column.
struct ConfigParseError : std::runtime_error {
  ConfigParseError(const std::string& message, std::size_t line, std::size_t column);
  std::size_t line;
  std::size_t column;
};

/// Parses config text; JSON syntax errors become ConfigParseError.
json parse_config(const std::string& text);

/// Kinds in CLI order: solve, picard-smoothing, supsum, bilinear, region, scaling.
std::vector<std::string> list_experiments();
/// Throws std::invalid_argument for unknown kinds.
std::string describe(const std::string& kind);

struct CsvTable {
  std::string name;
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
  /// "lines", "logxy", "heatmap" or "" (no figure)
  std::string plot;
  std::string x, y, z;
};

struct ExperimentReport {
  json document;
  std::vector<CsvTable> tables;
};

/// Checks every parameter against the target operation's preconditions
/// without computing anything. Throws std::invalid_argument naming the
/// violated condition.
void validate_config(const json& config);

/// Validates, runs and assembles the report (nothing is written).
ExperimentReport run_experiment(const json& config);

/// Writes report.json and one CSV per table into dir; returns the report path.
std::filesystem::path write_report(const ExperimentReport& report, const std::filesystem::path& dir);

/// The report with its timing block removed, as compared for determinism.
json numeric_content(const json& report);

struct PlotResult {
  std::vector<std::filesystem::path> scripts;
  std::vector<std::string> warnings;
};

/// gnuplot scripts next to the report, one per figure, reading the CSVs.
PlotResult emit_plots(const std::filesystem::path& report_path);

/// 64-bit FNV-1a, hex encoded.
std::string fnv1a_hex(const std::string& bytes);

}  // namespace nlslab
