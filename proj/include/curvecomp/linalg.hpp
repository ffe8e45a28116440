#pragma once

#include <Eigen/Dense>

#include <functional>
#include <span>
#include <vector>

namespace curvecomp {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Gauss–Legendre nodes and weights on [-1, 1].
class GaussLegendreRule {
 public:
  explicit GaussLegendreRule(int order);

  int order() const noexcept { return static_cast<int>(nodes_.size()); }
  std::span<const double> nodes() const noexcept { return nodes_; }
  std::span<const double> weights() const noexcept { return weights_; }

  /// Shared 32-point rule used throughout the library.
  static const GaussLegendreRule& standard();

 private:
  std::vector<double> nodes_;
  std::vector<double> weights_;
};

/// Composite rule over `panels` equal panels of [a, b].
double integrate_panels(const std::function<double(double)>& f, double a, double b, int panels,
                        const GaussLegendreRule& rule = GaussLegendreRule::standard());

/// ∫_a^b g(t) g(t)ᵀ dt by composite 32-point Gauss–Legendre, doubling the
/// panel count until successive estimates agree to 1e-12 in max norm.
/// Throws NumericalError after 20 doublings without convergence.
Matrix integrate_outer(const std::function<Vector(double)>& g, double a, double b);

/// Inverse of a nonsingular square matrix. Throws NumericalError naming
/// `name` when the reciprocal condition number is at most 1e-13.
Matrix invert(const Matrix& a, const char* name = "matrix", int group = 0);

/// Lower-triangular L with L Lᵀ = A for symmetric positive semidefinite A.
/// Zero pivots are allowed; pivots below -1e-10 raise NumericalError.
Matrix cholesky(const Matrix& a, const char* name = "matrix", int group = 0);

double min_eigenvalue(const Matrix& symmetric);
double max_abs(const Matrix& a);

}  // namespace curvecomp
