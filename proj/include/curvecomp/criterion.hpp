#pragma once

#include "curvecomp/estimator.hpp"
#include "curvecomp/kernel.hpp"
#include "curvecomp/model.hpp"

#include <array>
#include <limits>
#include <optional>
#include <span>
#include <vector>

namespace curvecomp {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// Two groups observed on a shared interval. `p` is the criterion order in
/// [1, ∞]; use kInfinity for the sup criterion.
struct ComparisonProblem {
  RegressionModel model1;
  RegressionModel model2;
  TriangularKernel kernel1;
  TriangularKernel kernel2;
  Interval interval;
  int n1 = 5;
  int n2 = 5;
  double p = kInfinity;

  const RegressionModel& model(int i) const { return i == 0 ? model1 : model2; }
  const TriangularKernel& kernel(int i) const { return i == 0 ? kernel1 : kernel2; }
  int n(int i) const { return i == 0 ? n1 : n2; }

  /// Throws InvalidArgument unless n_i ≥ m_i + 1 and p ≥ 1.
  void validate() const;
};

struct CurvePoint {
  double t;
  double phi;
  double lower_bound;
};

struct CriterionReport {
  double value = 0.0;
  std::optional<double> argmax_t;  // p = ∞ only
  std::vector<CurvePoint> curve;
  std::array<Matrix, 2> variances;
};

/// Everything about a ComparisonProblem that does not depend on the design:
/// Brownian-time models, M_i, C_i⁻¹ and the regressors on the sup grid.
class CriterionEvaluator {
 public:
  static constexpr int kSupGridPoints = 2001;
  static constexpr int kLpPanels = 64;

  explicit CriterionEvaluator(ComparisonProblem problem);

  const ComparisonProblem& problem() const noexcept { return problem_; }
  const TransformedModel& transformed(int i) const { return transformed_[i]; }
  const Matrix& m_matrix(int i) const { return m_[i]; }
  const Matrix& c_inverse(int i) const { return c_inv_[i]; }

  /// Var(θ̂_i) with optimal weights: C⁻¹ [f̃ f̃ᵀ/ã + M B⁻¹ M] C⁻¹.
  Matrix optimal_variance(int i, const BrownianDesign& design) const;
  std::array<Matrix, 2> optimal_variances(const DesignPair& designs) const;

  /// φ_n(t) for given per-group variance matrices.
  double phi(const std::array<Matrix, 2>& variances, double t) const;
  double lower_bound(double t) const;

  struct Value {
    double value;
    std::optional<double> argmax_t;
  };

  /// μ_p for given per-group variances (sup via grid plus golden-section refinement).
  Value criterion(const std::array<Matrix, 2>& variances) const;
  Value criterion(const DesignPair& designs) const;
  /// μ_p for designs given in Brownian time (one list per group).
  Value criterion_brownian(std::span<const double> brownian1, std::span<const double> brownian2) const;

  CriterionReport report(const DesignPair& designs) const;

 private:
  double grid_t(int k) const;

  ComparisonProblem problem_;
  std::array<TransformedModel, 2> transformed_;
  std::array<Matrix, 2> m_;
  std::array<Matrix, 2> c_inv_;
  std::array<Matrix, 2> grid_f_;  // m_i × kSupGridPoints
};

double variance_difference_at(const ComparisonProblem& problem, const DesignPair& designs, double t);
double continuous_lower_bound_at(const ComparisonProblem& problem, double t);
CriterionReport mu_p(const ComparisonProblem& problem, const DesignPair& designs);

}  // namespace curvecomp
