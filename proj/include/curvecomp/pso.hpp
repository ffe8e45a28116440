#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <utility>
#include <vector>

namespace curvecomp {

struct PsoConfig {
  int particles = 40;
  int iterations = 300;
  double inertia = 0.7298;
  double cognitive = 1.49618;
  double social = 1.49618;
  std::uint64_t seed = 20160601;
  int restarts = 4;
  unsigned threads = 1;
  int polish_evaluations = 2000;  // 0 disables the final local search

  /// Throws InvalidArgument for non-positive counts or coefficients.
  void validate() const;
};

struct PsoResult {
  std::vector<double> argmin;
  double value = 0.0;
  std::vector<double> history;  // best value after each iteration, restarts concatenated, then the polished value
  long evaluations = 0;
};

using Objective = std::function<double(std::span<const double>)>;
using Bounds = std::vector<std::pair<double, double>>;

/// Global-best particle swarm with constriction coefficients. Every restart
/// uses its own sub-seed and each particle draws from its own stream, so the
/// result depends only on the seed. `seeds` are injected as initial particles
/// of every restart. The best point over all restarts is then polished by a
/// bounded Nelder–Mead search of at most `polish_evaluations` evaluations.
/// Non-finite objective values count as +inf.
PsoResult pso_minimize(const Objective& objective, const Bounds& bounds, const PsoConfig& cfg,
                       std::span<const std::vector<double>> seeds = {});

}  // namespace curvecomp
