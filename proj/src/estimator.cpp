#include "curvecomp/estimator.hpp"

#include "curvecomp/error.hpp"

#include <cmath>
#include <sstream>

namespace curvecomp {

BrownianDesign BrownianDesign::from_original(const TransformedModel& model, const GroupDesign& design) {
  BrownianDesign out;
  out.times.reserve(design.size());
  out.values.reserve(design.size());
  for (const double t : design.points()) {
    out.times.push_back(model.to_brownian_time(t));
    out.values.push_back(model.value_at(t));
  }
  return out;
}

BrownianDesign BrownianDesign::from_brownian(const TransformedModel& model, std::span<const double> brownian_points) {
  BrownianDesign out;
  out.times.assign(brownian_points.begin(), brownian_points.end());
  out.values.reserve(brownian_points.size());
  for (const double s : brownian_points) out.values.push_back(model.eval(s));
  return out;
}

WeightSet WeightSet::from_omegas(std::vector<Vector> omegas, const BrownianDesign& design) {
  if (static_cast<int>(omegas.size()) != design.size() - 1) {
    throw InvalidArgument("a weight set needs one vector per increment (n - 1)");
  }
  WeightSet w;
  w.gammas.reserve(omegas.size());
  for (std::size_t j = 0; j < omegas.size(); ++j) {
    w.gammas.push_back(omegas[j] * std::sqrt(design.times[j + 1] - design.times[j]));
  }
  w.omegas = std::move(omegas);
  return w;
}

CMatrix compute_C(const TransformedModel& model, int group) {
  Matrix c = model.derivative_gram() + model.initial_term();
  Matrix c_inv = invert(c, "C", group);
  return {std::move(c), std::move(c_inv)};
}

CMatrix compute_C(const RegressionModel& model, const Interval& iv) {
  return compute_C(to_brownian(TriangularKernel::brownian(), model, iv));
}

Matrix compute_B(const BrownianDesign& design) {
  const auto m = design.values.front().size();
  Matrix b = Matrix::Zero(m, m);
  for (int j = 1; j < design.size(); ++j) {
    const Vector df = design.values[j] - design.values[j - 1];
    b.noalias() += df * df.transpose() / (design.times[j] - design.times[j - 1]);
  }
  return b;
}

Matrix compute_B(const TransformedModel& model, const GroupDesign& design) {
  return compute_B(BrownianDesign::from_original(model, design));
}

Matrix compute_B(const RegressionModel& model, const GroupDesign& design) {
  return compute_B(to_brownian(TriangularKernel::brownian(), model, design.interval()), design);
}

IncrementFactor factor_increments(const Matrix& m, const BrownianDesign& design, int group) {
  const int increments = design.size() - 1;
  const auto dim = m.rows();
  if (increments < dim) {
    std::ostringstream msg;
    msg << "matrix B";
    if (group > 0) msg << " of group " << group;
    msg << " is singular: " << increments << " increments cannot identify " << dim << " parameters";
    throw NumericalError("B", group, msg.str());
  }
  try {
    invert(compute_B(design), "B", group);
  } catch (const NumericalError& e) {
    throw NumericalError("B", group,
                         std::string(e.what()) + "; the basis increments are linearly dependent on this design");
  }
  // G has rows Δf̃_jᵀ/√Δt̃_j, so B = GᵀG = RᵀR. Working with R instead of B
  // squares neither the condition number nor the rounding error.
  Matrix g(increments, dim);
  for (int j = 1; j < design.size(); ++j) {
    g.row(j - 1) = (design.values[j] - design.values[j - 1]).transpose() / std::sqrt(design.times[j] - design.times[j - 1]);
  }
  const Eigen::HouseholderQR<Matrix> qr(g);
  IncrementFactor out;
  out.q = qr.householderQ() * Matrix::Identity(increments, dim);
  const Matrix r = qr.matrixQR().topRows(dim).triangularView<Eigen::Upper>();
  // M R⁻¹ = (R⁻ᵀ Mᵀ)ᵀ
  out.m_r_inv = r.transpose().triangularView<Eigen::Lower>().solve(m.transpose()).transpose();
  return out;
}

WeightSet optimal_weights(const TransformedModel& model, const Matrix& m, const BrownianDesign& design, int group) {
  if (m.rows() != model.dim()) throw InvalidArgument("M does not match the model dimension");
  const IncrementFactor f = factor_increments(m, design, group);
  // γ*_j = M B⁻¹ Δf̃_j / √Δt̃_j = M R⁻¹ Qᵀ e_j
  const Matrix gammas = f.m_r_inv * f.q.transpose();
  std::vector<Vector> omegas;
  omegas.reserve(gammas.cols());
  for (int j = 1; j < design.size(); ++j) {
    omegas.push_back(gammas.col(j - 1) / std::sqrt(design.times[j] - design.times[j - 1]));
  }
  return WeightSet::from_omegas(std::move(omegas), design);
}

WeightSet optimal_weights(const TransformedModel& model, const GroupDesign& design, int group) {
  return optimal_weights(model, model.derivative_gram(), BrownianDesign::from_original(model, design), group);
}

WeightSet optimal_weights(const RegressionModel& model, const GroupDesign& design) {
  return optimal_weights(to_brownian(TriangularKernel::brownian(), model, design.interval()), design);
}

double check_unbiasedness(const TransformedModel& model, const GroupDesign& design, const WeightSet& weights) {
  const BrownianDesign bd = BrownianDesign::from_original(model, design);
  if (static_cast<int>(weights.omegas.size()) != bd.size() - 1) {
    throw InvalidArgument("weight set does not match the design size");
  }
  Matrix residual = model.derivative_gram();
  for (int j = 1; j < bd.size(); ++j) {
    residual.noalias() -= weights.omegas[j - 1] * (bd.values[j] - bd.values[j - 1]).transpose();
  }
  return max_abs(residual);
}

double check_unbiasedness(const RegressionModel& model, const GroupDesign& design, const WeightSet& weights) {
  return check_unbiasedness(to_brownian(TriangularKernel::brownian(), model, design.interval()), design, weights);
}

EstimatorSpec make_estimator(const TransformedModel& model, const GroupDesign& design, WeightSet weights, int group) {
  BrownianDesign bd = BrownianDesign::from_original(model, design);
  const int n = bd.size();
  if (static_cast<int>(weights.omegas.size()) != n - 1) throw InvalidArgument("weight set does not match the design size");
  CMatrix c = compute_C(model, group);

  // Coefficients on Ỹ(t̃_j) = Y(t_j) / v(t_j), then rescaled to act on Y.
  std::vector<Vector> coefficients;
  coefficients.reserve(n);
  const auto& w = weights.omegas;
  coefficients.push_back(c.c_inv * (bd.values.front() / bd.times.front() - w.front()));
  for (int j = 1; j < n - 1; ++j) coefficients.push_back(c.c_inv * (w[j - 1] - w[j]));
  coefficients.push_back(c.c_inv * w.back());
  for (int j = 0; j < n; ++j) coefficients[j] /= model.kernel().v(design[j]);

  return EstimatorSpec{model, design, std::move(bd), std::move(weights), std::move(c.c_inv), std::move(coefficients)};
}

EstimatorSpec make_optimal_estimator(const TransformedModel& model, const GroupDesign& design, int group) {
  return make_estimator(model, design, optimal_weights(model, design, group), group);
}

Matrix estimator_variance(const EstimatorSpec& spec) {
  Matrix inner = spec.model.initial_term();
  for (const Vector& g : spec.weights.gammas) inner.noalias() += g * g.transpose();
  const Matrix v = spec.c_inv * inner * spec.c_inv;
  return 0.5 * (v + v.transpose());
}

Vector apply_estimator(const EstimatorSpec& spec, std::span<const double> data) {
  if (static_cast<int>(data.size()) != spec.design.size()) {
    std::ostringstream msg;
    msg << "estimator expects " << spec.design.size() << " observations, got " << data.size();
    throw InvalidArgument(msg.str());
  }
  Vector theta = Vector::Zero(spec.model.dim());
  for (std::size_t j = 0; j < data.size(); ++j) theta += spec.coefficients[j] * data[j];
  return theta;
}

WlseResult wlse(const RegressionModel& model, std::span<const double> points, const TriangularKernel& kernel,
                std::optional<std::span<const double>> data, int group) {
  const auto n = static_cast<Eigen::Index>(points.size());
  if (n == 0) throw InvalidArgument("weighted least squares needs at least one point");
  Matrix x(n, model.dim());
  for (Eigen::Index j = 0; j < n; ++j) x.row(j) = model.eval(points[j]).transpose();
  const Matrix sigma = kernel.gram(points);
  Eigen::LLT<Matrix> llt(sigma);
  if (llt.info() != Eigen::Success) {
    throw NumericalError("Gram", group, "kernel Gram matrix is singular on the design");
  }
  const Matrix whitened_x = llt.matrixL().solve(x);  // L⁻¹X
  const Matrix information = whitened_x.transpose() * whitened_x;
  Matrix variance;
  try {
    variance = invert(information, "information", group);
  } catch (const NumericalError& e) {
    throw NumericalError("X", group, std::string(e.what()) + "; the design matrix is rank deficient");
  }
  WlseResult out{0.5 * (variance + variance.transpose()), std::nullopt};
  if (data) {
    if (static_cast<Eigen::Index>(data->size()) != n) throw InvalidArgument("data length does not match the design");
    const Vector y = Eigen::Map<const Vector>(data->data(), n);
    const Vector whitened_y = llt.matrixL().solve(y);
    out.estimate = out.variance * (whitened_x.transpose() * whitened_y);
  }
  return out;
}

}  // namespace curvecomp
