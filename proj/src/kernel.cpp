#include "curvecomp/kernel.hpp"

#include "curvecomp/error.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <sstream>

namespace curvecomp {

namespace {

std::string scaled_name(const std::string& base, double factor) {
  std::ostringstream name;
  name.precision(12);
  name << base << "*" << factor;
  return name.str();
}

}  // namespace

Interval::Interval(double a, double b) : a_(a), b_(b) {
  if (!(std::isfinite(a) && std::isfinite(b) && 0.0 < a && a < b)) {
    std::ostringstream msg;
    msg << "interval [" << a << ", " << b << "] must satisfy 0 < a < b";
    throw InvalidArgument(msg.str());
  }
}

TriangularKernel::TriangularKernel(std::string name, Fn u, Fn v, Fn du, Fn dv, Fn q_inverse)
    : name_(std::move(name)),
      u_(std::move(u)),
      v_(std::move(v)),
      du_(std::move(du)),
      dv_(std::move(dv)),
      q_inverse_(std::move(q_inverse)) {
  if (!u_ || !v_ || !du_ || !dv_) throw InvalidArgument("kernel " + name_ + " needs u, v and their derivatives");
}

TriangularKernel TriangularKernel::brownian(double scale) {
  if (!(scale > 0.0 && std::isfinite(scale))) throw InvalidArgument("kernel scale must be positive");
  return TriangularKernel(
      scale == 1.0 ? std::string("brownian") : scaled_name("brownian", scale), [scale](double t) { return scale * t; },
      [](double) { return 1.0; }, [scale](double) { return scale; }, [](double) { return 0.0; },
      [scale](double s) { return s / scale; });
}

TriangularKernel TriangularKernel::exponential(double lambda, double scale) {
  if (!(lambda > 0.0 && std::isfinite(lambda))) throw InvalidArgument("exponential kernel rate must be positive");
  if (!(scale > 0.0 && std::isfinite(scale))) throw InvalidArgument("kernel scale must be positive");
  std::ostringstream name;
  name.precision(12);
  name << "exp:" << lambda;
  // exp(-λ|t - t'|) = e^{λ t} e^{-λ t'} for t ≤ t', so q(t) = scale · e^{2λt}.
  return TriangularKernel(
      scale == 1.0 ? name.str() : scaled_name(name.str(), scale), [lambda, scale](double t) { return scale * std::exp(lambda * t); },
      [lambda](double t) { return std::exp(-lambda * t); },
      [lambda, scale](double t) { return scale * lambda * std::exp(lambda * t); },
      [lambda](double t) { return -lambda * std::exp(-lambda * t); },
      [lambda, scale](double s) { return std::log(s / scale) / (2.0 * lambda); });
}

TriangularKernel TriangularKernel::parse(std::string_view text) {
  if (text == "brownian") return brownian();
  if (text.starts_with("exp:")) {
    const auto rest = text.substr(4);
    double lambda = 0.0;
    const auto [ptr, ec] = std::from_chars(rest.data(), rest.data() + rest.size(), lambda);
    if (rest.empty() || ec != std::errc() || ptr != rest.data() + rest.size()) {
      throw InvalidArgument("malformed kernel '" + std::string(text) + "': expected exp:<lambda>");
    }
    if (!(lambda > 0.0) || !std::isfinite(lambda)) {
      throw InvalidArgument("malformed kernel '" + std::string(text) + "': lambda must be positive");
    }
    return exponential(lambda);
  }
  throw InvalidArgument("unknown kernel '" + std::string(text) + "': expected brownian or exp:<lambda>");
}

TriangularKernel TriangularKernel::scaled(double factor) const {
  if (!(factor > 0.0 && std::isfinite(factor))) throw InvalidArgument("kernel scale must be positive");
  Fn qi;
  if (q_inverse_) qi = [inner = q_inverse_, factor](double s) { return inner(s / factor); };
  return TriangularKernel(
      scaled_name(name_, factor), [u = u_, factor](double t) { return factor * u(t); }, v_,
      [du = du_, factor](double t) { return factor * du(t); }, dv_, std::move(qi));
}

double TriangularKernel::operator()(double t, double s) const {
  return t <= s ? u_(t) * v_(s) : u_(s) * v_(t);
}

double TriangularKernel::dq(double t) const {
  const double vt = v_(t);
  return (du_(t) * vt - u_(t) * dv_(t)) / (vt * vt);
}

double TriangularKernel::q_inverse(double brownian_time, const Interval& iv) const {
  if (q_inverse_) return q_inverse_(brownian_time);
  double lo = iv.a();
  double hi = iv.b();
  const double qlo = q(lo);
  const double qhi = q(hi);
  const double slack = 1e-12 * std::max(std::abs(qlo), std::abs(qhi));
  if (brownian_time < qlo - slack || brownian_time > qhi + slack) {
    std::ostringstream msg;
    msg << "Brownian time " << brownian_time << " outside [" << qlo << ", " << qhi << "]";
    throw InvalidArgument(msg.str());
  }
  while (hi - lo > 1e-12 * std::max(1.0, std::abs(hi))) {
    const double mid = 0.5 * (lo + hi);
    if (q(mid) < brownian_time) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

void TriangularKernel::validate_on(const Interval& iv) const {
  constexpr int kChecks = 1000;
  double previous = 0.0;
  for (int k = 0; k <= kChecks; ++k) {
    const double t = iv.a() + iv.length() * k / kChecks;
    const double ut = u_(t);
    const double vt = v_(t);
    if (!(ut > 0.0) || !(vt > 0.0) || !std::isfinite(ut) || !std::isfinite(vt)) {
      throw InvalidArgument("kernel " + name_ + ": u and v must be positive and finite on the design interval");
    }
    const double qt = ut / vt;
    if (k > 0 && !(qt > previous)) {
      throw InvalidArgument("kernel " + name_ + ": q = u/v is not strictly increasing on the design interval");
    }
    previous = qt;
  }
}

Matrix TriangularKernel::gram(std::span<const double> points) const {
  const auto n = static_cast<Eigen::Index>(points.size());
  Matrix g(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index k = 0; k <= j; ++k) {
      g(j, k) = g(k, j) = (*this)(points[j], points[k]);
    }
  }
  return g;
}

GroupDesign::GroupDesign(std::vector<double> points, const Interval& iv) : points_(std::move(points)), iv_(iv) {
  if (points_.size() < 2) throw InvalidArgument("a group design needs at least two points");
  const double tol = 1e-12 * iv.length();
  if (std::abs(points_.front() - iv.a()) > tol || std::abs(points_.back() - iv.b()) > tol) {
    std::ostringstream msg;
    msg << "design must start at a = " << iv.a() << " and end at b = " << iv.b();
    throw InvalidArgument(msg.str());
  }
  points_.front() = iv.a();
  points_.back() = iv.b();
  for (std::size_t j = 1; j < points_.size(); ++j) {
    if (!(points_[j] - points_[j - 1] >= iv.min_spacing())) {
      std::ostringstream msg;
      msg << "design points must increase by at least " << iv.min_spacing() << " (points " << j << " and "
          << j + 1 << ": " << points_[j - 1] << ", " << points_[j] << ")";
      throw InvalidArgument(msg.str());
    }
  }
}

TransformedModel::TransformedModel(RegressionModel model, TriangularKernel kernel, const Interval& iv)
    : model_(std::move(model)), kernel_(std::move(kernel)), iv_(iv) {
  kernel_.validate_on(iv_);
  brownian_a_ = kernel_.q(iv_.a());
  brownian_b_ = kernel_.q(iv_.b());
}

Vector TransformedModel::value_at(double t) const { return model_.eval(t) / kernel_.v(t); }

Vector TransformedModel::deriv_at(double t) const {
  const double vt = kernel_.v(t);
  const Vector dfdt = (model_.deriv(t) * vt - model_.eval(t) * kernel_.dv(t)) / (vt * vt);
  return dfdt / kernel_.dq(t);
}

Matrix TransformedModel::derivative_gram() const {
  // dt̃ = q'(t) dt, so ∫ h(t̃) h(t̃)ᵀ dt̃ = ∫ [h √q'] [h √q']ᵀ dt.
  return integrate_outer([this](double t) -> Vector { return deriv_at(t) * std::sqrt(kernel_.dq(t)); }, iv_.a(),
                         iv_.b());
}

Matrix TransformedModel::initial_term() const {
  const Vector fa = value_at(iv_.a());
  return fa * fa.transpose() / brownian_a_;
}

TransformedModel to_brownian(const TriangularKernel& kernel, const RegressionModel& model, const Interval& iv) {
  return TransformedModel(model, kernel, iv);
}

std::vector<double> from_brownian_design(std::span<const double> brownian_points, const TriangularKernel& kernel,
                                         const Interval& iv) {
  const double qa = kernel.q(iv.a());
  const double qb = kernel.q(iv.b());
  const double slack = 1e-12 * std::max(std::abs(qa), std::abs(qb));
  std::vector<double> out;
  out.reserve(brownian_points.size());
  for (const double s : brownian_points) {
    if (s < qa - slack || s > qb + slack) {
      std::ostringstream msg;
      msg << "Brownian-time point " << s << " lies outside [" << qa << ", " << qb << "]";
      throw InvalidArgument(msg.str());
    }
    const double t = std::clamp(kernel.q_inverse(std::clamp(s, qa, qb), iv), iv.a(), iv.b());
    if (!out.empty() && !(t > out.back())) throw InvalidArgument("Brownian-time design is not strictly increasing");
    out.push_back(t);
  }
  return out;
}

}  // namespace curvecomp
