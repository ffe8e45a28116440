#pragma once

// Test-only reference computations. Nothing here calls the closed-form
// variance or criterion code it is used to check.

#include "curvecomp/estimator.hpp"
#include "curvecomp/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

namespace curvecomp::testing {

/// Σ_{j,k} c_j K(t_j, t_k) c_kᵀ with the original kernel and data-scale coefficients.
inline Matrix direct_covariance(const EstimatorSpec& spec) {
  const auto pts = spec.design.points();
  const auto& k = spec.model.kernel();
  const int m = spec.model.dim();
  Matrix out = Matrix::Zero(m, m);
  for (std::size_t j = 0; j < pts.size(); ++j) {
    for (std::size_t l = 0; l < pts.size(); ++l) {
      out += spec.coefficients[j] * k(pts[j], pts[l]) * spec.coefficients[l].transpose();
    }
  }
  return out;
}

/// ∫_a^b ḟ ḟᵀ for f = (sin t, cos t) from antiderivatives.
inline Matrix trig2_m_closed_form(double a, double b) {
  auto cos2 = [](double t) { return t / 2 + std::sin(2 * t) / 4; };   // ∫ cos²
  auto sin2 = [](double t) { return t / 2 - std::sin(2 * t) / 4; };   // ∫ sin²
  auto cross = [](double t) { return -std::sin(t) * std::sin(t) / 2; };  // ∫ -cos·sin
  Matrix m(2, 2);
  m(0, 0) = cos2(b) - cos2(a);
  m(1, 1) = sin2(b) - sin2(a);
  m(0, 1) = m(1, 0) = cross(b) - cross(a);
  return m;
}

/// n-point design on iv with random interior points (sorted, spaced).
inline GroupDesign random_design(int n, const Interval& iv, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(iv.a(), iv.b());
  while (true) {
    std::vector<double> pts{iv.a(), iv.b()};
    for (int j = 0; j < n - 2; ++j) pts.push_back(u(rng));
    std::sort(pts.begin(), pts.end());
    bool ok = true;
    for (std::size_t j = 1; j < pts.size(); ++j) ok = ok && pts[j] - pts[j - 1] > 1e-3 * iv.length();
    if (ok) return GroupDesign(pts, iv);
  }
}

namespace detail {

// Increments Δf̃_jᵀ stacked as rows, with a thin QR factorization D = Q R.
struct IncrementBasis {
  Matrix d;
  Matrix q;
  Matrix r;
  BrownianDesign bd;

  IncrementBasis(const TransformedModel& model, const GroupDesign& design)
      : bd(BrownianDesign::from_original(model, design)) {
    const int m = model.dim();
    const int k = bd.size() - 1;
    d.resize(k, m);
    for (int j = 0; j < k; ++j) d.row(j) = (bd.values[j + 1] - bd.values[j]).transpose();
    const Eigen::HouseholderQR<Matrix> qr(d);
    q = qr.householderQ() * Matrix::Identity(k, m);
    r = qr.matrixQR().topRows(m).triangularView<Eigen::Upper>();
  }

  // Z projected onto the null space of Dᵀ (rows of the result are orthogonal to col(D)).
  Matrix null_noise(int m, std::mt19937_64& rng, double noise) const {
    const int k = static_cast<int>(d.rows());
    std::normal_distribution<double> normal;
    Matrix z(m, k);
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < k; ++j) z(i, j) = noise * normal(rng);
    return z - (z * q) * q.transpose();
  }
};

inline WeightSet to_weights(const Matrix& w, const BrownianDesign& bd) {
  std::vector<Vector> omegas;
  for (Eigen::Index j = 0; j < w.cols(); ++j) omegas.push_back(w.col(j));
  return WeightSet::from_omegas(std::move(omegas), bd);
}

}  // namespace detail

/// A random weight set satisfying the unbiasedness constraint M = W D, where
/// W = [ω_2 ... ω_n] and D stacks the increments Δf̃_jᵀ: least-norm solution
/// W0 = M R⁻¹ Qᵀ (from D = QR) plus null-space components of Dᵀ whose entries
/// have standard deviation `noise` × RMS(W0). Scaling by W0 keeps the
/// instances comparable across kernels, whose Brownian-time units differ by
/// many orders of magnitude.
inline WeightSet random_unbiased_weights(const TransformedModel& model, const GroupDesign& design,
                                         std::mt19937_64& rng, double noise = 1.0) {
  const detail::IncrementBasis basis(model, design);
  const Matrix mm = model.derivative_gram();
  // W0 = M R⁻¹ Qᵀ, i.e. solve Rᵀ X = Mᵀ for X = (M R⁻¹)ᵀ
  const Matrix mr = basis.r.transpose().triangularView<Eigen::Lower>().solve(mm.transpose()).transpose();
  const Matrix w0 = mr * basis.q.transpose();
  const double rms = w0.norm() / std::sqrt(static_cast<double>(w0.size()));
  const Matrix w = w0 + basis.null_noise(model.dim(), rng, noise * rms);
  return detail::to_weights(w, basis.bd);
}

/// Perturbation of `base` that keeps unbiasedness.
inline WeightSet perturb_unbiased(const TransformedModel& model, const GroupDesign& design, const WeightSet& base,
                                  std::mt19937_64& rng, double noise) {
  const detail::IncrementBasis basis(model, design);
  Matrix w(model.dim(), static_cast<Eigen::Index>(base.omegas.size()));
  for (std::size_t j = 0; j < base.omegas.size(); ++j) w.col(static_cast<Eigen::Index>(j)) = base.omegas[j];
  return detail::to_weights(w + basis.null_noise(model.dim(), rng, noise), basis.bd);
}

}  // namespace curvecomp::testing
