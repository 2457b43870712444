#ifndef NASHLQ_ERRORS_H_
#define NASHLQ_ERRORS_H_

#include <stdexcept>
#include <string>

namespace nashlq {

// K - A failed the positive-definite factorization; the closed loop
// x' = (A - K) x is not exponentially stable at that profile.
class NotPositiveDefiniteError : public std::runtime_error {
 public:
  explicit NotPositiveDefiniteError(const std::string& what)
      : std::runtime_error(what) {}
};

// Inputs to an analysis routine violate its stated preconditions.
class PreconditionViolatedError : public std::invalid_argument {
 public:
  explicit PreconditionViolatedError(const std::string& what)
      : std::invalid_argument(what) {}
};

// A configuration object failed validation.
class InvalidConfigError : public std::invalid_argument {
 public:
  explicit InvalidConfigError(const std::string& what)
      : std::invalid_argument(what) {}
};

}  // namespace nashlq

#endif  // NASHLQ_ERRORS_H_
