#include "curvecomp/linalg.hpp"

#include "curvecomp/error.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <utility>

namespace curvecomp {

namespace {

// Returns (P_n(x), P_{n-1}(x)) by the three-term recurrence.
std::pair<double, double> legendre_pair(int n, double x) {
  double prev = 1.0;
  double cur = x;
  for (int k = 2; k <= n; ++k) {
    const double next = ((2.0 * k - 1.0) * x * cur - (k - 1.0) * prev) / k;
    prev = cur;
    cur = next;
  }
  return {cur, prev};
}

}  // namespace

GaussLegendreRule::GaussLegendreRule(int order) {
  if (order < 1) throw InvalidArgument("Gauss-Legendre order must be positive");
  nodes_.resize(order);
  weights_.resize(order);
  for (int i = 0; i < (order + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (order + 0.5));
    double dp = 1.0;
    for (int iter = 0; iter < 100; ++iter) {
      const auto [p, pm1] = legendre_pair(order, x);
      dp = order * (x * p - pm1) / (x * x - 1.0);
      const double dx = p / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    const auto [p, pm1] = legendre_pair(order, x);
    dp = order * (x * p - pm1) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    nodes_[i] = -x;
    nodes_[order - 1 - i] = x;
    weights_[i] = w;
    weights_[order - 1 - i] = w;
  }
  if (order % 2 == 1) nodes_[order / 2] = 0.0;
}

const GaussLegendreRule& GaussLegendreRule::standard() {
  static const GaussLegendreRule rule(32);
  return rule;
}

double integrate_panels(const std::function<double(double)>& f, double a, double b, int panels,
                        const GaussLegendreRule& rule) {
  const double h = (b - a) / panels;
  double total = 0.0;
  for (int p = 0; p < panels; ++p) {
    const double mid = a + (p + 0.5) * h;
    double s = 0.0;
    for (int k = 0; k < rule.order(); ++k) s += rule.weights()[k] * f(mid + 0.5 * h * rule.nodes()[k]);
    total += 0.5 * h * s;
  }
  return total;
}

namespace {

Matrix outer_panels(const std::function<Vector(double)>& g, double a, double b, int panels) {
  const auto& rule = GaussLegendreRule::standard();
  const double h = (b - a) / panels;
  Matrix total;
  for (int p = 0; p < panels; ++p) {
    const double mid = a + (p + 0.5) * h;
    for (int k = 0; k < rule.order(); ++k) {
      const Vector v = g(mid + 0.5 * h * rule.nodes()[k]);
      if (total.size() == 0) total = Matrix::Zero(v.size(), v.size());
      total.noalias() += (0.5 * h * rule.weights()[k]) * v * v.transpose();
    }
  }
  return total;
}

}  // namespace

Matrix integrate_outer(const std::function<Vector(double)>& g, double a, double b) {
  if (!(a < b)) throw InvalidArgument("integrate_outer requires a < b");
  int panels = 1;
  Matrix previous = outer_panels(g, a, b, panels);
  for (int doubling = 0; doubling < 20; ++doubling) {
    panels *= 2;
    Matrix current = outer_panels(g, a, b, panels);
    if (max_abs(current - previous) < 1e-12) return 0.5 * (current + current.transpose());
    previous = std::move(current);
  }
  throw NumericalError("M", 0, "quadrature did not converge after 20 panel doublings");
}

Matrix invert(const Matrix& a, const char* name, int group) {
  if (a.rows() != a.cols() || a.rows() == 0) throw InvalidArgument("invert requires a non-empty square matrix");
  Eigen::PartialPivLU<Matrix> lu(a);
  const double rcond = lu.rcond();
  if (!(rcond > 1e-13)) {
    std::ostringstream msg;
    msg << "matrix " << name;
    if (group > 0) msg << " of group " << group;
    msg << " is singular or ill-conditioned (reciprocal condition estimate " << rcond << ")";
    throw NumericalError(name, group, msg.str());
  }
  return lu.inverse();
}

Matrix cholesky(const Matrix& a, const char* name, int group) {
  const Eigen::Index n = a.rows();
  if (a.cols() != n) throw InvalidArgument("cholesky requires a square matrix");
  Matrix l = Matrix::Zero(n, n);
  const double scale = std::max(1.0, a.diagonal().cwiseAbs().maxCoeff());
  for (Eigen::Index j = 0; j < n; ++j) {
    double pivot = a(j, j) - l.row(j).head(j).squaredNorm();
    if (pivot < -1e-10) {
      std::ostringstream msg;
      msg << "matrix " << name;
      if (group > 0) msg << " of group " << group;
      msg << " is not positive semidefinite (pivot " << pivot << " at row " << j << ")";
      throw NumericalError(name, group, msg.str());
    }
    if (pivot <= 1e-15 * scale) continue;  // semidefinite direction: zero column
    const double d = std::sqrt(pivot);
    l(j, j) = d;
    for (Eigen::Index i = j + 1; i < n; ++i) {
      l(i, j) = (a(i, j) - l.row(i).head(j).dot(l.row(j).head(j))) / d;
    }
  }
  return l;
}

double min_eigenvalue(const Matrix& symmetric) {
  const Matrix s = 0.5 * (symmetric + symmetric.transpose());
  Eigen::SelfAdjointEigenSolver<Matrix> eig(s, Eigen::EigenvaluesOnly);
  return eig.eigenvalues().minCoeff();
}

double max_abs(const Matrix& a) { return a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff(); }

}  // namespace curvecomp
