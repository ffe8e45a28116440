#include "curvecomp/simulate.hpp"

#include "curvecomp/error.hpp"
#include "curvecomp/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace curvecomp {

namespace {

Matrix design_matrix(const RegressionModel& model, std::span<const double> points) {
  Matrix x(static_cast<Eigen::Index>(points.size()), model.dim());
  for (std::size_t j = 0; j < points.size(); ++j) x.row(static_cast<Eigen::Index>(j)) = model.eval(points[j]).transpose();
  return x;
}

Matrix grid_regressors(const RegressionModel& model, std::span<const double> grid) {
  Matrix f(model.dim(), static_cast<Eigen::Index>(grid.size()));
  for (std::size_t k = 0; k < grid.size(); ++k) f.col(static_cast<Eigen::Index>(k)) = model.eval(grid[k]);
  return f;
}

Vector standard_normal(Eigen::Index n, Rng& rng) {
  std::normal_distribution<double> normal;
  Vector z(n);
  for (Eigen::Index i = 0; i < n; ++i) z[i] = normal(rng);
  return z;
}

// Draws observations for one group with a fixed Cholesky factor.
struct GroupSampler {
  Vector mean;
  Matrix chol;

  GroupSampler(const RegressionModel& model, const TriangularKernel& kernel, std::span<const double> points,
               const Vector& theta, int group)
      : mean(design_matrix(model, points) * theta), chol(cholesky(kernel.gram(points), "Gram", group)) {}

  Vector draw(Rng& rng) const { return mean + chol * standard_normal(mean.size(), rng); }
};

}  // namespace

Vector sample_observations(const RegressionModel& model, const TriangularKernel& kernel,
                           std::span<const double> points, const Vector& theta, Rng& rng) {
  if (theta.size() != model.dim()) throw InvalidArgument("parameter dimension does not match the model");
  return GroupSampler(model, kernel, points, theta, 0).draw(rng);
}

Vector sample_observations(const RegressionModel& model, const TriangularKernel& kernel,
                           std::span<const double> points, const Vector& theta, std::span<const double> z) {
  if (theta.size() != model.dim()) throw InvalidArgument("parameter dimension does not match the model");
  if (z.size() != points.size()) throw InvalidArgument("noise vector length does not match the design");
  const GroupSampler sampler(model, kernel, points, theta, 0);
  return sampler.mean + sampler.chol * Eigen::Map<const Vector>(z.data(), static_cast<Eigen::Index>(z.size()));
}

namespace {

// Precomputed pieces of a band on a fixed grid.
struct BandPlan {
  std::array<Matrix, 2> f;       // regressors on the grid
  std::array<Matrix, 2> chol;    // Cholesky factors of the variances
  Eigen::ArrayXd sd;             // √g(t)

  BandPlan(const std::array<Matrix, 2>& variances, const RegressionModel& model1, const RegressionModel& model2,
           std::span<const double> grid) {
    f = {grid_regressors(model1, grid), grid_regressors(model2, grid)};
    Eigen::ArrayXd g = Eigen::ArrayXd::Zero(static_cast<Eigen::Index>(grid.size()));
    for (int i = 0; i < 2; ++i) {
      chol[i] = cholesky(variances[i], "variance", i + 1);
      g += (f[i].array() * (variances[i] * f[i]).array()).colwise().sum().transpose();
    }
    for (Eigen::Index k = 0; k < g.size(); ++k) {
      if (!(g[k] >= 1e-14)) {
        std::ostringstream msg;
        msg << "degenerate band: variance of the difference is " << g[k] << " at t = " << grid[k];
        throw NumericalError("variance", 0, msg.str());
      }
    }
    sd = g.sqrt();
  }

  double band_constant(double alpha, int reps, Rng& rng) const {
    std::vector<double> sups(reps);
    for (int r = 0; r < reps; ++r) {
      const Vector th1 = chol[0] * standard_normal(chol[0].rows(), rng);
      const Vector th2 = chol[1] * standard_normal(chol[1].rows(), rng);
      const Eigen::ArrayXd diff = (f[0].transpose() * th1 - f[1].transpose() * th2).array();
      sups[r] = (diff.abs() / sd).maxCoeff();
    }
    std::sort(sups.begin(), sups.end());
    const auto idx = static_cast<std::size_t>(std::ceil((1.0 - alpha) * reps)) - 1;
    return sups[std::min(idx, sups.size() - 1)];
  }
};

BandResult build_band(const BandPlan& plan, const std::array<Vector, 2>& estimates, std::span<const double> grid,
                      double alpha, int reps, Rng& rng) {
  BandResult out;
  out.d = plan.band_constant(alpha, reps, rng);
  out.grid.assign(grid.begin(), grid.end());
  const Eigen::VectorXd center = plan.f[0].transpose() * estimates[0] - plan.f[1].transpose() * estimates[1];
  out.center.assign(center.data(), center.data() + center.size());
  out.halfwidth.resize(grid.size());
  double widest = 0.0;
  for (std::size_t k = 0; k < grid.size(); ++k) {
    out.halfwidth[k] = out.d * plan.sd[static_cast<Eigen::Index>(k)];
    widest = std::max(widest, out.halfwidth[k]);
  }
  out.maxwidth = 2.0 * widest;
  return out;
}

}  // namespace

BandResult bootstrap_band(const std::array<Vector, 2>& estimates, const std::array<Matrix, 2>& variances,
                          const RegressionModel& model1, const RegressionModel& model2, std::span<const double> grid,
                          double alpha, int reps, Rng& rng) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw InvalidArgument("alpha must lie in (0, 1)");
  if (reps < 1) throw InvalidArgument("bootstrap needs at least one replication");
  if (grid.empty()) throw InvalidArgument("band grid is empty");
  if (estimates[0].size() != model1.dim() || estimates[1].size() != model2.dim()) {
    throw InvalidArgument("estimate dimensions do not match the models");
  }
  const BandPlan plan(variances, model1, model2, grid);
  return build_band(plan, estimates, grid, alpha, reps, rng);
}

std::vector<double> band_grid(const Interval& iv, int points) {
  if (points < 1) throw InvalidArgument("band grid needs at least one point");
  if (points == 1) return {iv.a()};
  std::vector<double> grid(points);
  for (int k = 0; k < points; ++k) grid[k] = iv.a() + iv.length() * k / (points - 1);
  grid.back() = iv.b();
  return grid;
}

void SimulationPlan::validate() const {
  problem.validate();
  if (theta1.size() != problem.model1.dim() || theta2.size() != problem.model2.dim()) {
    throw InvalidArgument("true parameter dimensions do not match the models");
  }
  if (!(alpha > 0.0 && alpha < 1.0)) throw InvalidArgument("alpha must lie in (0, 1)");
  if (replications < 1 || bootstrap_reps < 1 || grid_points < 1) {
    throw InvalidArgument("replications, bootstrap_reps and grid_points must be positive");
  }
  if (!(noise_scale > 0.0 && std::isfinite(noise_scale))) throw InvalidArgument("noise_scale must be positive");
}

CoverageResult coverage_experiment(const SimulationPlan& plan) {
  plan.validate();
  const auto& problem = plan.problem;
  const CriterionEvaluator evaluator(problem);
  const std::vector<double> grid = band_grid(problem.interval, plan.grid_points);

  std::array<Matrix, 2> variances;
  std::vector<EstimatorSpec> specs;
  if (plan.estimator == EstimatorKind::optimal) {
    for (int i = 0; i < 2; ++i) specs.push_back(make_optimal_estimator(evaluator.transformed(i), plan.designs[i], i + 1));
    variances = {estimator_variance(specs[0]), estimator_variance(specs[1])};
  } else {
    for (int i = 0; i < 2; ++i) {
      variances[i] = wlse(problem.model(i), plan.designs[i].points(), problem.kernel(i), std::nullopt, i + 1).variance;
    }
  }

  std::vector<GroupSampler> samplers;
  const std::array<const Vector*, 2> thetas = {&plan.theta1, &plan.theta2};
  for (int i = 0; i < 2; ++i) {
    const TriangularKernel noise =
        plan.noise_scale == 1.0 ? problem.kernel(i) : problem.kernel(i).scaled(plan.noise_scale);
    samplers.emplace_back(problem.model(i), noise, plan.designs[i].points(), *thetas[i], i + 1);
  }

  const BandPlan band_plan(variances, problem.model1, problem.model2, grid);
  const Eigen::VectorXd truth =
      band_plan.f[0].transpose() * plan.theta1 - band_plan.f[1].transpose() * plan.theta2;

  struct Replication {
    bool covered = false;
    BandResult band;
  };
  std::vector<Replication> reps(plan.replications);
  parallel_for(reps.size(), plan.threads, [&](std::size_t r) {
    Rng rng(mix_seed(plan.seed, r));
    std::array<Vector, 2> estimates;
    for (int i = 0; i < 2; ++i) {
      const Vector y = samplers[i].draw(rng);
      const std::span<const double> data(y.data(), static_cast<std::size_t>(y.size()));
      estimates[i] = plan.estimator == EstimatorKind::optimal
                         ? apply_estimator(specs[i], data)
                         : *wlse(problem.model(i), plan.designs[i].points(), problem.kernel(i), data, i + 1).estimate;
    }
    Replication& out = reps[r];
    out.band = build_band(band_plan, estimates, grid, plan.alpha, plan.bootstrap_reps, rng);
    out.covered = true;
    for (std::size_t k = 0; k < grid.size(); ++k) {
      if (std::abs(out.band.center[k] - truth[static_cast<Eigen::Index>(k)]) > out.band.halfwidth[k]) {
        out.covered = false;
        break;
      }
    }
  });

  CoverageResult result;
  result.replications = plan.replications;
  result.grid = grid;
  result.center.assign(grid.size(), 0.0);
  result.lower.assign(grid.size(), 0.0);
  result.upper.assign(grid.size(), 0.0);
  result.true_diff.assign(truth.data(), truth.data() + truth.size());
  int covered = 0;
  double width_sum = 0.0;
  for (const Replication& r : reps) {
    covered += r.covered ? 1 : 0;
    width_sum += r.band.maxwidth;
    for (std::size_t k = 0; k < grid.size(); ++k) {
      result.center[k] += r.band.center[k];
      result.lower[k] += r.band.center[k] - r.band.halfwidth[k];
      result.upper[k] += r.band.center[k] + r.band.halfwidth[k];
    }
  }
  const double n = static_cast<double>(plan.replications);
  for (std::size_t k = 0; k < grid.size(); ++k) {
    result.center[k] /= n;
    result.lower[k] /= n;
    result.upper[k] /= n;
  }
  result.coverage = covered / n;
  result.mean_maxwidth = width_sum / n;
  return result;
}

}  // namespace curvecomp
