#pragma once

#include "curvecomp/criterion.hpp"
#include "curvecomp/estimator.hpp"
#include "curvecomp/kernel.hpp"
#include "curvecomp/model.hpp"

#include <array>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace curvecomp {

using Rng = std::mt19937_64;

/// Y = X θ + L z with L the Cholesky factor of the kernel Gram matrix on `points`.
Vector sample_observations(const RegressionModel& model, const TriangularKernel& kernel,
                           std::span<const double> points, const Vector& theta, Rng& rng);
/// Same with a caller-supplied standard-normal vector z.
Vector sample_observations(const RegressionModel& model, const TriangularKernel& kernel,
                           std::span<const double> points, const Vector& theta, std::span<const double> z);

struct BandResult {
  double d = 0.0;
  std::vector<double> grid;
  std::vector<double> center;
  std::vector<double> halfwidth;
  double maxwidth = 0.0;
};

/// Simultaneous band center ± D √g(t). D is the empirical (1 - alpha) quantile
/// of sup_t |f₁ᵀθ₁* - f₂ᵀθ₂*| / √g(t) with θ_i* ~ N(0, Σ_i).
BandResult bootstrap_band(const std::array<Vector, 2>& estimates, const std::array<Matrix, 2>& variances,
                          const RegressionModel& model1, const RegressionModel& model2, std::span<const double> grid,
                          double alpha, int reps, Rng& rng);

enum class EstimatorKind { optimal, wlse };

struct SimulationPlan {
  ComparisonProblem problem;
  DesignPair designs;
  Vector theta1;
  Vector theta2;
  int replications = 100;
  double alpha = 0.05;
  int bootstrap_reps = 1000;
  int grid_points = 201;
  std::uint64_t seed = 1;
  /// Multiplies the kernels used to draw data only; bands keep the design variances.
  double noise_scale = 1.0;
  EstimatorKind estimator = EstimatorKind::optimal;
  unsigned threads = 1;

  void validate() const;
};

struct CoverageResult {
  double coverage = 0.0;
  double mean_maxwidth = 0.0;
  int replications = 0;
  // Averages of the per-replication bands on the band grid.
  std::vector<double> grid;
  std::vector<double> center;
  std::vector<double> lower;
  std::vector<double> upper;
  std::vector<double> true_diff;
};

CoverageResult coverage_experiment(const SimulationPlan& plan);

std::vector<double> band_grid(const Interval& iv, int points);

}  // namespace curvecomp
