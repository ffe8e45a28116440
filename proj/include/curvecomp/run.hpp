#pragma once

#include "curvecomp/config.hpp"

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

namespace curvecomp {

inline constexpr int kExitSuccess = 0;
inline constexpr int kExitNumerical = 1;
inline constexpr int kExitConfig = 2;

/// Files produced by a run.
struct RunOutputs {
  std::filesystem::path design;            // design.json
  std::filesystem::path criterion_curve;   // criterion_curve.csv
  std::optional<std::filesystem::path> band;     // band.csv (simulate)
  std::optional<std::filesystem::path> summary;  // summary.csv (simulate)
  double criterion_value = 0.0;
};

/// Executes a parsed configuration and writes its output files.
/// Throws NumericalError / ConfigError on failure.
RunOutputs execute(const RunConfig& config);

/// Loads, executes and maps failures to exit codes (0 ok, 1 numerical, 2 config),
/// reporting progress on `out` and diagnostics on `err`.
int run(const std::string& config_path, std::ostream& out, std::ostream& err,
        const std::optional<std::string>& output_dir_override = std::nullopt);

}  // namespace curvecomp
