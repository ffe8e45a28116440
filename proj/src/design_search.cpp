#include "curvecomp/design_search.hpp"

#include "curvecomp/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace curvecomp {

GroupDesign uniform_design(int n, const Interval& iv) {
  if (n < 2) throw InvalidArgument("a uniform design needs n >= 2");
  std::vector<double> points(n);
  for (int j = 0; j < n; ++j) points[j] = iv.a() + j * iv.length() / (n - 1);
  points.back() = iv.b();
  return GroupDesign(std::move(points), iv);
}

DesignPair uniform_design_pair(const ComparisonProblem& problem) {
  return {uniform_design(problem.n1, problem.interval), uniform_design(problem.n2, problem.interval)};
}

std::vector<double> repair_interior(std::span<const double> interior, const Interval& iv) {
  // Slightly above the minimum so the q⁻¹(q(t)) round trip cannot undercut it.
  const double delta = 1.001 * iv.min_spacing();
  std::vector<double> x(interior.begin(), interior.end());
  std::sort(x.begin(), x.end());
  const auto k = x.size();
  for (std::size_t j = 0; j < k; ++j) {
    // Leave room for the points still to come on either side.
    const double lo = iv.a() + delta * static_cast<double>(j + 1);
    const double hi = iv.b() - delta * static_cast<double>(k - j);
    x[j] = std::clamp(x[j], lo, hi);
    if (j > 0) x[j] = std::max(x[j], x[j - 1] + delta);
  }
  return x;
}

namespace {

std::vector<double> full_design(std::span<const double> interior, const Interval& iv) {
  std::vector<double> points;
  points.reserve(interior.size() + 2);
  points.push_back(iv.a());
  points.insert(points.end(), interior.begin(), interior.end());
  points.push_back(iv.b());
  return points;
}

std::vector<double> to_brownian_points(const TransformedModel& model, std::span<const double> points) {
  std::vector<double> out;
  out.reserve(points.size());
  for (const double t : points) out.push_back(model.to_brownian_time(t));
  return out;
}

}  // namespace

DesignSearchResult optimize_design_pair(const ComparisonProblem& problem, const PsoConfig& cfg) {
  const CriterionEvaluator evaluator(problem);
  const Interval& iv = problem.interval;
  const int k1 = problem.n1 - 2;
  const int k2 = problem.n2 - 2;

  // Particle → Brownian-time designs for both groups.
  auto decode = [&](std::span<const double> x) {
    std::array<std::vector<double>, 2> brownian;
    const std::span<const double> parts[2] = {x.subspan(0, k1), x.subspan(k1, k2)};
    for (int i = 0; i < 2; ++i) {
      brownian[i] = to_brownian_points(evaluator.transformed(i), full_design(repair_interior(parts[i], iv), iv));
    }
    return brownian;
  };

  const Objective objective = [&](std::span<const double> x) {
    const auto brownian = decode(x);
    try {
      return evaluator.criterion_brownian(brownian[0], brownian[1]).value;
    } catch (const NumericalError&) {
      return std::numeric_limits<double>::infinity();
    }
  };

  const Bounds bounds(static_cast<std::size_t>(k1 + k2), {iv.a(), iv.b()});
  std::vector<std::vector<double>> seeds;
  {
    const DesignPair uniform = uniform_design_pair(problem);
    std::vector<double> x;
    for (int i = 0; i < 2; ++i) {
      const auto pts = uniform[i].points();
      x.insert(x.end(), pts.begin() + 1, pts.end() - 1);
    }
    seeds.push_back(std::move(x));
  }

  const PsoResult pso = pso_minimize(objective, bounds, cfg, seeds);
  if (!std::isfinite(pso.value)) {
    throw NumericalError("B", 0, "every candidate design produced a singular B matrix");
  }

  DesignSearchResult out{
      .best = uniform_design_pair(problem),
      .value = 0.0,
      .brownian_value = pso.value,
      .argmax_t = std::nullopt,
      .history = pso.history,
      .evaluations = pso.evaluations,
      .brownian_points = {},
  };
  const auto brownian = decode(pso.argmin);
  std::vector<GroupDesign> groups;
  for (int i = 0; i < 2; ++i) {
    out.brownian_points[i] = brownian[i];
    groups.emplace_back(from_brownian_design(brownian[i], problem.kernel(i), iv), iv);
  }
  out.best = DesignPair{groups[0], groups[1]};
  const auto value = evaluator.criterion(out.best);
  out.value = value.value;
  out.argmax_t = value.argmax_t;
  return out;
}

}  // namespace curvecomp
