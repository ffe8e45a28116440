#include "curvecomp/model.hpp"

#include "curvecomp/error.hpp"

#include <charconv>
#include <cmath>
#include <sstream>

namespace curvecomp {

namespace {

double parse_number(std::string_view text, std::string_view context) {
  double value = 0.0;
  const auto* first = text.data();
  const auto* last = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (text.empty() || ec != std::errc() || ptr != last || !std::isfinite(value)) {
    throw InvalidArgument("malformed number '" + std::string(text) + "' in '" + std::string(context) + "'");
  }
  return value;
}

std::string format_number(double x) {
  std::ostringstream out;
  out.precision(12);
  out << x;
  return out.str();
}

}  // namespace

BasisFunction BasisFunction::monomial(int power) {
  if (power < 0) throw InvalidArgument("monomial power must be non-negative");
  return {Kind::monomial, static_cast<double>(power)};
}

BasisFunction BasisFunction::sine(double frequency) {
  if (!std::isfinite(frequency) || frequency == 0.0) throw InvalidArgument("sine frequency must be finite and non-zero");
  return {Kind::sine, frequency};
}

BasisFunction BasisFunction::cosine(double frequency) {
  if (!std::isfinite(frequency)) throw InvalidArgument("cosine frequency must be finite");
  return {Kind::cosine, frequency};
}

BasisFunction BasisFunction::exponential(double rate) {
  if (!std::isfinite(rate)) throw InvalidArgument("exponential rate must be finite");
  return {Kind::exponential, rate};
}

BasisFunction BasisFunction::parse(std::string_view text) {
  const auto colon = text.find(':');
  if (colon == std::string_view::npos) {
    throw InvalidArgument("basis function '" + std::string(text) + "' must look like kind:parameter");
  }
  const auto kind = text.substr(0, colon);
  const double p = parse_number(text.substr(colon + 1), text);
  if (kind == "mono") {
    if (p != std::floor(p) || p < 0 || p > 64) throw InvalidArgument("monomial power must be an integer in [0, 64]");
    return monomial(static_cast<int>(p));
  }
  if (kind == "sin") return sine(p);
  if (kind == "cos") return cosine(p);
  if (kind == "exp") return exponential(p);
  throw InvalidArgument("unknown basis kind '" + std::string(kind) + "'");
}

double BasisFunction::eval(double t) const {
  switch (kind_) {
    case Kind::monomial: return std::pow(t, parameter_);
    case Kind::sine: return std::sin(parameter_ * t);
    case Kind::cosine: return std::cos(parameter_ * t);
    case Kind::exponential: return std::exp(parameter_ * t);
  }
  return 0.0;
}

double BasisFunction::deriv(double t) const {
  switch (kind_) {
    case Kind::monomial: return parameter_ == 0.0 ? 0.0 : parameter_ * std::pow(t, parameter_ - 1.0);
    case Kind::sine: return parameter_ * std::cos(parameter_ * t);
    case Kind::cosine: return -parameter_ * std::sin(parameter_ * t);
    case Kind::exponential: return parameter_ * std::exp(parameter_ * t);
  }
  return 0.0;
}

std::string BasisFunction::to_string() const {
  switch (kind_) {
    case Kind::monomial: return "mono:" + format_number(parameter_);
    case Kind::sine: return "sin:" + format_number(parameter_);
    case Kind::cosine: return "cos:" + format_number(parameter_);
    case Kind::exponential: return "exp:" + format_number(parameter_);
  }
  return {};
}

RegressionModel::RegressionModel(std::vector<BasisFunction> basis, std::string name)
    : basis_(std::move(basis)), name_(std::move(name)) {
  if (basis_.empty()) throw InvalidArgument("a regression model needs at least one basis function");
  for (std::size_t i = 0; i < basis_.size(); ++i) {
    for (std::size_t j = i + 1; j < basis_.size(); ++j) {
      if (basis_[i] == basis_[j]) {
        throw InvalidArgument("duplicate basis function " + basis_[i].to_string());
      }
    }
  }
  if (name_.empty()) {
    for (std::size_t i = 0; i < basis_.size(); ++i) {
      if (i > 0) name_ += ',';
      name_ += basis_[i].to_string();
    }
  }
}

RegressionModel RegressionModel::preset(std::string_view name) {
  if (name == "trig2") {
    return RegressionModel({BasisFunction::sine(1), BasisFunction::cosine(1)}, "trig2");
  }
  if (name == "trig4") {
    return RegressionModel({BasisFunction::sine(1), BasisFunction::cosine(1), BasisFunction::sine(2),
                            BasisFunction::cosine(2)},
                           "trig4");
  }
  throw InvalidArgument("unknown model preset '" + std::string(name) + "'");
}

Vector RegressionModel::eval(double t) const {
  Vector out(dim());
  for (int i = 0; i < dim(); ++i) out[i] = basis_[i].eval(t);
  return out;
}

Vector RegressionModel::deriv(double t) const {
  Vector out(dim());
  for (int i = 0; i < dim(); ++i) out[i] = basis_[i].deriv(t);
  return out;
}

}  // namespace curvecomp
