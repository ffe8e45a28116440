#include "curvecomp/criterion.hpp"
#include "curvecomp/design_search.hpp"
#include "curvecomp/error.hpp"

#include "oracles.hpp"
#include "reference_cases.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace curvecomp;
using curvecomp::testing::reference_cases;

namespace {

const Interval kIv(1.0, 10.0);

ComparisonProblem linear_problem() {
  const RegressionModel lin({BasisFunction::monomial(1)});
  return {lin, lin, TriangularKernel::brownian(), TriangularKernel::brownian(), kIv, 3, 4, kInfinity};
}

DesignPair linear_designs() { return {GroupDesign({1, 4, 10}, kIv), GroupDesign({1, 2, 7.5, 10}, kIv)}; }

}  // namespace

TEST_CASE("variance_difference_at for linear trends") {
  const ComparisonProblem p = linear_problem();
  const DesignPair d = linear_designs();
  CHECK(variance_difference_at(p, d, 1.0) == doctest::Approx(0.2).epsilon(1e-12));
  CHECK(variance_difference_at(p, d, 10.0) == doctest::Approx(20.0).epsilon(1e-12));
  CHECK(variance_difference_at(p, d, 4.0) == doctest::Approx(0.2 * 16).epsilon(1e-12));
}

TEST_CASE("continuous_lower_bound_at for linear trends") {
  const ComparisonProblem p = linear_problem();
  CHECK(continuous_lower_bound_at(p, 10.0) == doctest::Approx(20.0).epsilon(1e-12));
  CHECK(continuous_lower_bound_at(p, 1.0) == doctest::Approx(0.2).epsilon(1e-12));
}

TEST_CASE("swapping group labels leaves the curve unchanged") {
  const ComparisonProblem p{RegressionModel::preset("trig2"), RegressionModel::preset("trig4"),
                            TriangularKernel::brownian(),     TriangularKernel::exponential(0.5),
                            kIv,                              5,
                            6,                                kInfinity};
  const ComparisonProblem swapped{p.model2, p.model1, p.kernel2, p.kernel1, kIv, 6, 5, kInfinity};
  const DesignPair d{GroupDesign({1, 3, 5, 8, 10}, kIv), GroupDesign({1, 2, 4, 6, 9, 10}, kIv)};
  const DesignPair ds{d.group2, d.group1};
  for (double t = 1.0; t <= 10.0; t += 0.75) {
    CHECK(variance_difference_at(p, d, t) == doctest::Approx(variance_difference_at(swapped, ds, t)).epsilon(1e-13));
  }
  CHECK(mu_p(p, d).value == doctest::Approx(mu_p(swapped, ds).value).epsilon(1e-13));
}

TEST_CASE("mu_p examples from the published tables") {
  const auto& c = reference_cases();
  CHECK(mu_p(c[0].problem(), c[0].designs()).value == doctest::Approx(0.64).epsilon(0.05));
  CHECK(mu_p(c[0].problem(), uniform_design_pair(c[0].problem())).value == doctest::Approx(0.79).epsilon(0.02));
  CHECK(mu_p(c[5].problem(), c[5].designs()).value == doctest::Approx(1.83).epsilon(0.05));
  CHECK(mu_p(c[5].problem(), uniform_design_pair(c[5].problem())).value == doctest::Approx(34.68).epsilon(0.02));
}

TEST_CASE("reported sup is consistent with the curve and a finer grid") {
  for (const auto& rc : reference_cases()) {
    const CriterionEvaluator eval(rc.problem());
    const DesignPair d = rc.designs();
    const CriterionReport r = eval.report(d);
    REQUIRE(r.argmax_t);
    double curve_max = 0.0;
    for (const auto& pt : r.curve) curve_max = std::max(curve_max, pt.phi);
    CHECK(r.value >= curve_max);
    CHECK(r.value == doctest::Approx(eval.phi(r.variances, *r.argmax_t)).epsilon(1e-14));
    // doubled grid
    const int fine = 2 * (CriterionEvaluator::kSupGridPoints - 1);
    double fine_max = 0.0;
    for (int k = 0; k <= fine; ++k) fine_max = std::max(fine_max, eval.phi(r.variances, 1.0 + 9.0 * k / fine));
    CHECK(r.value >= fine_max - 1e-8);
  }
}

TEST_CASE("finite-sample curve never falls below the continuous bound") {
  for (const auto& rc : reference_cases()) {
    const CriterionReport r = mu_p(rc.problem(), rc.designs());
    for (const auto& pt : r.curve) CHECK(pt.lower_bound <= pt.phi + 1e-10);
  }
}

TEST_CASE("published optima beat the uniform design") {
  for (const auto& rc : reference_cases()) {
    const ComparisonProblem p = rc.problem();
    CHECK(mu_p(p, rc.designs()).value <= mu_p(p, uniform_design_pair(p)).value);
  }
}

TEST_CASE("saddlepoint: perturbing optimal weights never lowers phi at the argmax") {
  std::mt19937_64 rng(41);
  const auto& rc = reference_cases()[3];
  const ComparisonProblem p = rc.problem();
  const CriterionEvaluator eval(p);
  const DesignPair d = rc.designs();
  const CriterionReport r = eval.report(d);
  const double t = *r.argmax_t;
  for (int trial = 0; trial < 100; ++trial) {
    std::array<Matrix, 2> v;
    for (int i = 0; i < 2; ++i) {
      const EstimatorSpec best = make_optimal_estimator(eval.transformed(i), d[i]);
      const WeightSet w = curvecomp::testing::perturb_unbiased(eval.transformed(i), d[i], best.weights, rng, 0.05);
      v[i] = estimator_variance(make_estimator(eval.transformed(i), d[i], w));
    }
    CHECK(eval.phi(v, t) >= r.value - 1e-10);
  }
}

TEST_CASE("finite p uses the L_p norm") {
  ComparisonProblem p = linear_problem();
  p.p = 2.0;
  // φ = 0.2 t²: (∫_1^10 0.04 t⁴ dt)^{1/2}
  const double expected = std::sqrt(0.04 * (1e5 - 1) / 5);
  const CriterionReport r = mu_p(p, linear_designs());
  CHECK(r.value == doctest::Approx(expected).epsilon(1e-12));
  CHECK_FALSE(r.argmax_t);
  p.p = 1.0;
  CHECK(mu_p(p, linear_designs()).value == doctest::Approx(0.2 * (1000 - 1) / 3).epsilon(1e-12));
  // larger p approaches the sup
  p.p = 200.0;
  CHECK(mu_p(p, linear_designs()).value == doctest::Approx(20.0).epsilon(0.02));
}

TEST_CASE("problem validation") {
  ComparisonProblem p = linear_problem();
  p.n1 = 1;
  CHECK_THROWS_AS(p.validate(), InvalidArgument);
  p = linear_problem();
  p.p = 0.5;
  CHECK_THROWS_AS(p.validate(), InvalidArgument);
  ComparisonProblem q{RegressionModel::preset("trig4"), RegressionModel::preset("trig2"),
                      TriangularKernel::brownian(),     TriangularKernel::brownian(),
                      kIv,                              4,
                      5,                                kInfinity};
  CHECK_THROWS_AS(q.validate(), InvalidArgument);
}

TEST_CASE("singular B names the group") {
  const ComparisonProblem p{RegressionModel::preset("trig2"), RegressionModel::preset("trig4"),
                            TriangularKernel::brownian(),     TriangularKernel::brownian(),
                            kIv,                              5,
                            5,                                kInfinity};
  const DesignPair d{GroupDesign({1, 5, 10}, kIv), GroupDesign({1, 3, 10}, kIv)};
  try {
    mu_p(p, d);
    FAIL("expected NumericalError");
  } catch (const NumericalError& e) {
    CHECK(e.matrix() == "B");
    CHECK(e.group() == 2);
  }
}
