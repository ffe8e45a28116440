#pragma once

#include "curvecomp/criterion.hpp"
#include "curvecomp/error.hpp"
#include "curvecomp/pso.hpp"
#include "curvecomp/simulate.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace curvecomp {

/// Configuration problem located in the source text. `line` is 1-based (0
/// when unknown) and `path` is a JSON pointer such as "/group1/kernel".
class ConfigError : public InvalidArgument {
 public:
  ConfigError(std::string source, int line, std::string path, const std::string& message);

  int line() const noexcept { return line_; }
  const std::string& path() const noexcept { return path_; }

 private:
  int line_;
  std::string path_;
};

enum class Task { optimize, evaluate, simulate };
enum class DesignChoice { uniform, optimal, explicit_points };

struct SimulationSettings {
  std::vector<double> theta1;
  std::vector<double> theta2;
  int replications = 100;
  double alpha = 0.05;
  int bootstrap_reps = 1000;
  int grid_points = 201;
  double noise_scale = 1.0;
  EstimatorKind estimator = EstimatorKind::optimal;
  unsigned threads = 1;
};

/// A validated run description. Unknown keys are rejected.
///
///   {
///     "task": "optimize" | "evaluate" | "simulate",
///     "interval": {"a": 1, "b": 10},
///     "group1": {"model": "trig2" | ["sin:1", ...], "kernel": "brownian" | "exp:<λ>", "n": 5},
///     "group2": {...},
///     "p": "inf" | number >= 1,
///     "pso": {"particles", "iterations", "inertia", "cognitive", "social", "restarts", "threads",
///             "polish_evaluations"},
///     "simulation": {"theta1", "theta2", "replications", "alpha", "bootstrap_reps",
///                    "grid_points", "noise_scale", "estimator": "optimal" | "wlse", "threads"},
///     "designs": "uniform" | "optimal" | {"group1": [...], "group2": [...]},
///     "output_dir": "out",
///     "seed": 42
///   }
struct RunConfig {
  Task task;
  ComparisonProblem problem;
  PsoConfig pso;
  std::optional<SimulationSettings> simulation;
  DesignChoice design_choice = DesignChoice::uniform;
  std::optional<DesignPair> designs;
  std::string output_dir;
  std::uint64_t seed = 1;
};

RunConfig parse_config(std::string_view text, const std::string& source = "<config>");
RunConfig load_config(const std::string& path);

std::string_view task_name(Task task);

}  // namespace curvecomp
