#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace sgflab {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A problem instance was constructed with inconsistent data.
class InvalidProblem : public Error {
 public:
  using Error::Error;
};

/// A numeric parameter is outside the domain of an operation.
class InvalidParameter : public Error {
 public:
  using Error::Error;
};

/// The operation needs metadata (or finite constants) the object lacks.
class Unsupported : public Error {
 public:
  using Error::Error;
};

/// A state or input became non-finite during integration.
class NumericFailure : public Error {
 public:
  NumericFailure(const std::string& what, std::size_t step)
      : Error(what + " (step " + std::to_string(step) + ")"), step_(step) {}
  std::size_t step() const noexcept { return step_; }

 private:
  std::size_t step_;
};

/// The state norm crossed the divergence guard.
class Divergence : public NumericFailure {
 public:
  using NumericFailure::NumericFailure;
};

/// A Monte-Carlo path failed; carries the offending path index.
class PathFailure : public Error {
 public:
  PathFailure(std::size_t path_index, const std::string& what)
      : Error("path " + std::to_string(path_index) + ": " + what),
        path_index_(path_index) {}
  std::size_t path_index() const noexcept { return path_index_; }

 private:
  std::size_t path_index_;
};

/// Rate fitting could not be performed on the requested window.
class FitError : public Error {
 public:
  using Error::Error;
};

/// Time argument outside the simulated horizon.
class RangeError : public Error {
 public:
  using Error::Error;
};

/// Invalid experiment configuration; `field()` is the dotted key at fault.
class ConfigError : public Error {
 public:
  ConfigError(std::string field, const std::string& what)
      : Error(field.empty() ? what : field + ": " + what), field_(std::move(field)) {}
  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

}  // namespace sgflab
