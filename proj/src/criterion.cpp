#include "curvecomp/criterion.hpp"

#include "curvecomp/error.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace curvecomp {

void ComparisonProblem::validate() const {
  for (int i = 0; i < 2; ++i) {
    if (n(i) < model(i).dim() + 1 || n(i) < 2) {
      std::ostringstream msg;
      msg << "group " << i + 1 << " needs at least " << model(i).dim() + 1 << " design points for " << model(i).dim()
          << " parameters (got " << n(i) << ")";
      throw InvalidArgument(msg.str());
    }
  }
  if (!(p >= 1.0)) throw InvalidArgument("criterion order p must lie in [1, inf]");
}

namespace {

std::array<TransformedModel, 2> transform_both(const ComparisonProblem& problem) {
  problem.validate();
  return {to_brownian(problem.kernel1, problem.model1, problem.interval),
          to_brownian(problem.kernel2, problem.model2, problem.interval)};
}

// Golden-section search for a maximum of f on [lo, hi] down to `tol` in t.
template <class F>
std::pair<double, double> golden_max(F&& f, double lo, double hi, double tol) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = hi - inv_phi * (hi - lo);
  double x2 = lo + inv_phi * (hi - lo);
  double f1 = f(x1);
  double f2 = f(x2);
  while (hi - lo > tol) {
    if (f1 < f2) {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + inv_phi * (hi - lo);
      f2 = f(x2);
    } else {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - inv_phi * (hi - lo);
      f1 = f(x1);
    }
  }
  return f1 >= f2 ? std::pair{x1, f1} : std::pair{x2, f2};
}

}  // namespace

CriterionEvaluator::CriterionEvaluator(ComparisonProblem problem)
    : problem_(std::move(problem)), transformed_(transform_both(problem_)) {
  for (int i = 0; i < 2; ++i) {
    m_[i] = transformed_[i].derivative_gram();
    c_inv_[i] = invert(m_[i] + transformed_[i].initial_term(), "C", i + 1);
    const auto& model = problem_.model(i);
    grid_f_[i].resize(model.dim(), kSupGridPoints);
    for (int k = 0; k < kSupGridPoints; ++k) grid_f_[i].col(k) = model.eval(grid_t(k));
  }
}

double CriterionEvaluator::grid_t(int k) const {
  const auto& iv = problem_.interval;
  if (k == kSupGridPoints - 1) return iv.b();
  return iv.a() + iv.length() * k / (kSupGridPoints - 1);
}

Matrix CriterionEvaluator::optimal_variance(int i, const BrownianDesign& design) const {
  if (design.size() < 2) throw InvalidArgument("a group design needs at least two points");
  const Matrix mr = factor_increments(m_[i], design, i + 1).m_r_inv;
  const Matrix inner = transformed_[i].initial_term() + mr * mr.transpose();
  const Matrix v = c_inv_[i] * inner * c_inv_[i];
  return 0.5 * (v + v.transpose());
}

std::array<Matrix, 2> CriterionEvaluator::optimal_variances(const DesignPair& designs) const {
  return {optimal_variance(0, BrownianDesign::from_original(transformed_[0], designs.group1)),
          optimal_variance(1, BrownianDesign::from_original(transformed_[1], designs.group2))};
}

double CriterionEvaluator::phi(const std::array<Matrix, 2>& variances, double t) const {
  double total = 0.0;
  for (int i = 0; i < 2; ++i) {
    const Vector f = problem_.model(i).eval(t);
    total += f.dot(variances[i] * f);
  }
  return total;
}

double CriterionEvaluator::lower_bound(double t) const { return phi(c_inv_, t); }

CriterionEvaluator::Value CriterionEvaluator::criterion(const std::array<Matrix, 2>& variances) const {
  const auto& iv = problem_.interval;
  if (std::isinf(problem_.p)) {
    Eigen::RowVectorXd values = Eigen::RowVectorXd::Zero(kSupGridPoints);
    for (int i = 0; i < 2; ++i) {
      values += (grid_f_[i].array() * (variances[i] * grid_f_[i]).array()).colwise().sum().matrix();
    }
    Eigen::Index best = 0;
    double best_value = values.maxCoeff(&best);
    double best_t = grid_t(static_cast<int>(best));
    const double lo = grid_t(std::max<int>(0, static_cast<int>(best) - 1));
    const double hi = grid_t(std::min<int>(kSupGridPoints - 1, static_cast<int>(best) + 1));
    const auto [t_star, v_star] = golden_max([&](double t) { return phi(variances, t); }, lo, hi, 1e-8);
    if (v_star > best_value) {
      best_value = v_star;
      best_t = t_star;
    }
    return {best_value, best_t};
  }
  const double p = problem_.p;
  const double integral = integrate_panels(
      [&](double t) { return std::pow(phi(variances, t), p); }, iv.a(), iv.b(), kLpPanels);
  return {std::pow(integral, 1.0 / p), std::nullopt};
}

CriterionEvaluator::Value CriterionEvaluator::criterion(const DesignPair& designs) const {
  return criterion(optimal_variances(designs));
}

CriterionEvaluator::Value CriterionEvaluator::criterion_brownian(std::span<const double> brownian1,
                                                                 std::span<const double> brownian2) const {
  return criterion(std::array<Matrix, 2>{
      optimal_variance(0, BrownianDesign::from_brownian(transformed_[0], brownian1)),
      optimal_variance(1, BrownianDesign::from_brownian(transformed_[1], brownian2))});
}

CriterionReport CriterionEvaluator::report(const DesignPair& designs) const {
  CriterionReport out;
  out.variances = optimal_variances(designs);
  const Value v = criterion(out.variances);
  out.value = v.value;
  out.argmax_t = v.argmax_t;
  out.curve.reserve(kSupGridPoints);
  for (int k = 0; k < kSupGridPoints; ++k) {
    const double t = grid_t(k);
    out.curve.push_back({t, phi(out.variances, t), lower_bound(t)});
  }
  return out;
}

double variance_difference_at(const ComparisonProblem& problem, const DesignPair& designs, double t) {
  const CriterionEvaluator eval(problem);
  return eval.phi(eval.optimal_variances(designs), t);
}

double continuous_lower_bound_at(const ComparisonProblem& problem, double t) {
  return CriterionEvaluator(problem).lower_bound(t);
}

CriterionReport mu_p(const ComparisonProblem& problem, const DesignPair& designs) {
  return CriterionEvaluator(problem).report(designs);
}

}  // namespace curvecomp
