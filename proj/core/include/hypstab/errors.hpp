#pragma once

#include <stdexcept>
#include <string>

namespace hypstab {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input: unparsable words, unsupported models, bad parameters.
class InvalidInput : public Error {
 public:
  using Error::Error;
};

/// A computation would exceed its configured memory/size budget.
class ResourceError : public Error {
 public:
  using Error::Error;
};

/// A vertex or geodesic needed by a computation lies outside the finite
/// Cayley region it was asked about.
class ContainmentError : public Error {
 public:
  using Error::Error;
};

/// Mathematical domain violation, e.g. a boundary triple with repeated points.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Finite truncation depth is too shallow for the requested quantity.
class PrecisionError : public Error {
 public:
  using Error::Error;
};

/// A check's hypothesis is not met by the supplied data.  `step()` names the
/// check that failed so reports can cite it.
class HypothesisError : public Error {
 public:
  HypothesisError(std::string step, const std::string& what)
      : Error(step + ": " + what), step_(std::move(step)) {}
  const std::string& step() const noexcept { return step_; }

 private:
  std::string step_;
};

}  // namespace hypstab
