#pragma once

#include <stdexcept>
#include <string>

namespace congestion {

/// Base class for every error raised by this library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid input: malformed files, broken invariants, precondition failures.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// A configured cap was exceeded (enumeration size, iteration budget,
/// search-space bound). Callers may retry with a different mode or budget.
class ResourceLimitError : public Error {
 public:
  ResourceLimitError(const std::string& what, double primal, double dual)
      : Error(what), primal_bound(primal), dual_bound(dual) {}
  explicit ResourceLimitError(const std::string& what) : Error(what) {}

  double primal_bound = 0.0;
  double dual_bound = 0.0;
};

/// A computation left the representable range (overflow, non-finite values).
class NumericRangeError : public Error {
 public:
  using Error::Error;
};

}  // namespace congestion
