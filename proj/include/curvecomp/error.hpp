#pragma once

#include <stdexcept>
#include <string>

namespace curvecomp {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A matrix that must be inverted or factorized is singular, ill-conditioned
/// or not positive semidefinite. `matrix()` names it ("B", "C", "Gram", ...)
/// and `group()` is 1 or 2 when the failure belongs to one group, 0 otherwise.
class NumericalError : public Error {
 public:
  NumericalError(std::string matrix, int group, const std::string& what)
      : Error(what), matrix_(std::move(matrix)), group_(group) {}

  const std::string& matrix() const noexcept { return matrix_; }
  int group() const noexcept { return group_; }

 private:
  std::string matrix_;
  int group_ = 0;
};

/// Invalid user input: bad presets, malformed designs, bad configuration.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

}  // namespace curvecomp
