#pragma once

#include "curvecomp/criterion.hpp"
#include "curvecomp/kernel.hpp"
#include "curvecomp/pso.hpp"

#include <optional>
#include <span>
#include <vector>

namespace curvecomp {

/// t_j = a + (j - 1)(b - a)/(n - 1), j = 1..n.
GroupDesign uniform_design(int n, const Interval& iv);
DesignPair uniform_design_pair(const ComparisonProblem& problem);

/// Interior coordinates in original time → sorted, clamped into
/// [a + δ, b - δ] and spaced at least δ = min_spacing() apart.
std::vector<double> repair_interior(std::span<const double> interior, const Interval& iv);

struct DesignSearchResult {
  DesignPair best;
  double value = 0.0;            // μ_p re-evaluated on `best` in original time
  double brownian_value = 0.0;   // objective value found in Brownian time
  std::optional<double> argmax_t;
  std::vector<double> history;
  long evaluations = 0;
  std::vector<double> brownian_points[2];
};

/// Minimizes μ_{p,n} over the interior points of both groups. Particles are
/// decoded per group (sort, clamp, space), mapped to Brownian time by q_i and
/// evaluated there; the winner is mapped back with from_brownian_design. The
/// uniform pair is always one of the initial particles.
DesignSearchResult optimize_design_pair(const ComparisonProblem& problem, const PsoConfig& cfg);

}  // namespace curvecomp
