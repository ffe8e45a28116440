#pragma once

#include "curvecomp/linalg.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace curvecomp {

/// One regression function with an analytic derivative.
///   monomial(k):    t^k   (k a non-negative integer)
///   sine(k):        sin(k t)
///   cosine(k):      cos(k t)
///   exponential(k): exp(k t)
class BasisFunction {
 public:
  enum class Kind { monomial, sine, cosine, exponential };

  static BasisFunction monomial(int power);
  static BasisFunction sine(double frequency);
  static BasisFunction cosine(double frequency);
  static BasisFunction exponential(double rate);

  /// Parses "mono:<k>", "sin:<k>", "cos:<k>" or "exp:<k>".
  static BasisFunction parse(std::string_view text);

  Kind kind() const noexcept { return kind_; }
  double parameter() const noexcept { return parameter_; }

  double eval(double t) const;
  double deriv(double t) const;

  /// Inverse of parse().
  std::string to_string() const;

  friend bool operator==(const BasisFunction&, const BasisFunction&) = default;

 private:
  BasisFunction(Kind kind, double parameter) : kind_(kind), parameter_(parameter) {}

  Kind kind_;
  double parameter_;
};

/// f(t) = (f_1(t), ..., f_m(t)) built from distinct basis functions.
class RegressionModel {
 public:
  explicit RegressionModel(std::vector<BasisFunction> basis, std::string name = {});

  /// "trig2" = (sin t, cos t); "trig4" = (sin t, cos t, sin 2t, cos 2t).
  static RegressionModel preset(std::string_view name);

  int dim() const noexcept { return static_cast<int>(basis_.size()); }
  const std::vector<BasisFunction>& basis() const noexcept { return basis_; }

  /// Preset name when built from one, otherwise the comma-joined basis.
  const std::string& name() const noexcept { return name_; }

  Vector eval(double t) const;
  Vector deriv(double t) const;

 private:
  std::vector<BasisFunction> basis_;
  std::string name_;
};

inline Vector eval_model(const RegressionModel& model, double t) { return model.eval(t); }
inline Vector eval_deriv(const RegressionModel& model, double t) { return model.deriv(t); }

}  // namespace curvecomp
