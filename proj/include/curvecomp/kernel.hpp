#pragma once

#include "curvecomp/linalg.hpp"
#include "curvecomp/model.hpp"

#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace curvecomp {

/// Design space [a, b] with 0 < a < b.
class Interval {
 public:
  Interval(double a, double b);

  double a() const noexcept { return a_; }
  double b() const noexcept { return b_; }
  double length() const noexcept { return b_ - a_; }

  /// Smallest admissible gap between consecutive design points.
  double min_spacing() const noexcept { return 1e-6 * (b_ - a_); }

  bool contains(double t) const noexcept { return t >= a_ && t <= b_; }

  friend bool operator==(const Interval&, const Interval&) = default;

 private:
  double a_;
  double b_;
};

/// Covariance K(t, t') = u(min(t, t')) v(max(t, t')).
///
/// q = u / v is the map to Brownian time. Presets carry closed forms for q⁻¹;
/// custom kernels fall back to bisection.
class TriangularKernel {
 public:
  using Fn = std::function<double(double)>;

  TriangularKernel(std::string name, Fn u, Fn v, Fn du, Fn dv, Fn q_inverse = {});

  /// K(t, t') = scale · min(t, t').
  static TriangularKernel brownian(double scale = 1.0);
  /// K(t, t') = scale · exp(-λ |t - t'|).
  static TriangularKernel exponential(double lambda, double scale = 1.0);
  /// "brownian" or "exp:<λ>" with λ > 0.
  static TriangularKernel parse(std::string_view text);

  const std::string& name() const noexcept { return name_; }

  /// Same kernel multiplied by `factor` > 0.
  TriangularKernel scaled(double factor) const;

  double operator()(double t, double s) const;
  double u(double t) const { return u_(t); }
  double v(double t) const { return v_(t); }
  double du(double t) const { return du_(t); }
  double dv(double t) const { return dv_(t); }

  double q(double t) const { return u_(t) / v_(t); }
  double dq(double t) const;

  /// q⁻¹ restricted to `iv`; bisection to 1e-12 when no closed form exists.
  double q_inverse(double brownian_time, const Interval& iv) const;

  /// Throws InvalidArgument unless u, v > 0 and q is strictly increasing on `iv`.
  void validate_on(const Interval& iv) const;

  /// Gram matrix (K(t_j, t_k))_{j,k}.
  Matrix gram(std::span<const double> points) const;

 private:
  std::string name_;
  Fn u_, v_, du_, dv_, q_inverse_;
};

inline double kernel_eval(const TriangularKernel& k, double t, double s) { return k(t, s); }

/// Ordered design points a = t_1 < ... < t_n = b with gaps ≥ min_spacing().
class GroupDesign {
 public:
  GroupDesign(std::vector<double> points, const Interval& iv);

  std::span<const double> points() const noexcept { return points_; }
  int size() const noexcept { return static_cast<int>(points_.size()); }
  double operator[](int j) const { return points_[j]; }
  const Interval& interval() const noexcept { return iv_; }

 private:
  std::vector<double> points_;
  Interval iv_;
};

struct DesignPair {
  GroupDesign group1;
  GroupDesign group2;

  const GroupDesign& operator[](int i) const { return i == 0 ? group1 : group2; }
};

/// A regression model with triangular-kernel errors rewritten as a model with
/// Brownian-motion errors: t̃ = q(t), f̃(t̃) = f(t) / v(t).
///
/// The `*_at` members take original time and are what the numerics use; the
/// plain members take Brownian time.
class TransformedModel {
 public:
  TransformedModel(RegressionModel model, TriangularKernel kernel, const Interval& iv);

  const RegressionModel& model() const noexcept { return model_; }
  const TriangularKernel& kernel() const noexcept { return kernel_; }
  const Interval& interval() const noexcept { return iv_; }
  int dim() const noexcept { return model_.dim(); }

  /// [q(a), q(b)]
  double brownian_a() const noexcept { return brownian_a_; }
  double brownian_b() const noexcept { return brownian_b_; }

  double to_brownian_time(double t) const { return kernel_.q(t); }
  double to_original_time(double brownian_time) const { return kernel_.q_inverse(brownian_time, iv_); }

  Vector eval(double brownian_time) const { return value_at(to_original_time(brownian_time)); }
  Vector deriv(double brownian_time) const { return deriv_at(to_original_time(brownian_time)); }

  /// f̃ at Brownian time q(t).
  Vector value_at(double t) const;
  /// df̃/dt̃ at Brownian time q(t), by the chain rule.
  Vector deriv_at(double t) const;

  /// ∫ (df̃/dt̃)(df̃/dt̃)ᵀ dt̃ over [q(a), q(b)], integrated in original time.
  Matrix derivative_gram() const;

  /// f̃(q(a)) f̃(q(a))ᵀ / q(a)
  Matrix initial_term() const;

 private:
  RegressionModel model_;
  TriangularKernel kernel_;
  Interval iv_;
  double brownian_a_;
  double brownian_b_;
};

TransformedModel to_brownian(const TriangularKernel& kernel, const RegressionModel& model, const Interval& iv);

/// Maps Brownian-time points back to [a, b]. Throws when a point lies outside
/// [q(a), q(b)] or the result is not strictly increasing.
std::vector<double> from_brownian_design(std::span<const double> brownian_points, const TriangularKernel& kernel,
                                         const Interval& iv);

}  // namespace curvecomp
