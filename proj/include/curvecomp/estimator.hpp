#pragma once

#include "curvecomp/kernel.hpp"
#include "curvecomp/linalg.hpp"
#include "curvecomp/model.hpp"

#include <optional>
#include <span>
#include <vector>

namespace curvecomp {

/// Design points of one group together with their Brownian-time images and
/// the transformed regressors f̃ at those points.
struct BrownianDesign {
  std::vector<double> times;    // t̃_j = q(t_j)
  std::vector<Vector> values;   // f̃(t̃_j)

  int size() const noexcept { return static_cast<int>(times.size()); }

  static BrownianDesign from_original(const TransformedModel& model, const GroupDesign& design);
  /// Points given directly in Brownian time; regressors evaluated through q⁻¹.
  static BrownianDesign from_brownian(const TransformedModel& model, std::span<const double> brownian_points);
};

/// Weight vectors ω_2, ..., ω_n of the increment estimator (stored at index
/// j - 2) and γ_j = ω_j √(t̃_j - t̃_{j-1}).
struct WeightSet {
  std::vector<Vector> omegas;
  std::vector<Vector> gammas;

  static WeightSet from_omegas(std::vector<Vector> omegas, const BrownianDesign& design);
};

struct CMatrix {
  Matrix c;
  Matrix c_inv;
};

/// C = M + f̃(ã) f̃(ã)ᵀ / ã and its inverse (the continuous-time BLUE variance).
CMatrix compute_C(const TransformedModel& model, int group = 0);
CMatrix compute_C(const RegressionModel& model, const Interval& iv);

/// B = Σ_j Δf̃_j Δf̃_jᵀ / Δt̃_j over consecutive design points.
Matrix compute_B(const BrownianDesign& design);
Matrix compute_B(const TransformedModel& model, const GroupDesign& design);
Matrix compute_B(const RegressionModel& model, const GroupDesign& design);

/// Thin QR factor Q of the scaled increments G (rows Δf̃_jᵀ/√Δt̃_j, so that
/// B = GᵀG = RᵀR) together with M R⁻¹. Then M B⁻¹ M = (M R⁻¹)(M R⁻¹)ᵀ and the
/// optimal γ*_j are the columns of M R⁻¹ Qᵀ. Throws NumericalError("B") when
/// B is singular.
struct IncrementFactor {
  Matrix q;
  Matrix m_r_inv;
};
IncrementFactor factor_increments(const Matrix& m, const BrownianDesign& design, int group = 0);

/// ω*_j = M B⁻¹ Δf̃_j / Δt̃_j. Throws NumericalError("B") when B is singular,
/// naming whether too few increments or a degenerate basis is the cause.
WeightSet optimal_weights(const TransformedModel& model, const Matrix& m, const BrownianDesign& design, int group = 0);
WeightSet optimal_weights(const TransformedModel& model, const GroupDesign& design, int group = 0);
WeightSet optimal_weights(const RegressionModel& model, const GroupDesign& design);

/// ‖M - Σ_j ω_j Δf̃_jᵀ‖_max
double check_unbiasedness(const TransformedModel& model, const GroupDesign& design, const WeightSet& weights);
double check_unbiasedness(const RegressionModel& model, const GroupDesign& design, const WeightSet& weights);

/// A fully specified linear estimator θ̂ = Σ_j c_j Y(t_j) in original data units.
struct EstimatorSpec {
  TransformedModel model;
  GroupDesign design;
  BrownianDesign brownian;
  WeightSet weights;
  Matrix c_inv;
  std::vector<Vector> coefficients;
};

EstimatorSpec make_estimator(const TransformedModel& model, const GroupDesign& design, WeightSet weights,
                             int group = 0);
/// Estimator with the optimal weights.
EstimatorSpec make_optimal_estimator(const TransformedModel& model, const GroupDesign& design, int group = 0);

/// C⁻¹ [f̃(ã) f̃(ã)ᵀ / ã + Σ_j γ_j γ_jᵀ] C⁻¹; valid for unbiased weights.
Matrix estimator_variance(const EstimatorSpec& spec);

/// θ̂ = Σ_j c_j Y(t_j). Throws InvalidArgument on a length mismatch.
Vector apply_estimator(const EstimatorSpec& spec, std::span<const double> data);

struct WlseResult {
  Matrix variance;
  std::optional<Vector> estimate;
};

/// Weighted least squares (XᵀΣ⁻¹X)⁻¹XᵀΣ⁻¹Y in original coordinates.
WlseResult wlse(const RegressionModel& model, std::span<const double> points, const TriangularKernel& kernel,
                std::optional<std::span<const double>> data = std::nullopt, int group = 0);

}  // namespace curvecomp
