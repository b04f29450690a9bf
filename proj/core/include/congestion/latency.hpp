#pragma once

#include <span>
#include <vector>

namespace congestion {

/// Polynomial latency with non-negative coefficients,
///   ell(x) = coeffs[0] + coeffs[1]*x + ... + coeffs[D]*x^D.
///
/// Construction validates the coefficients: all must be non-negative, at
/// least one positive (unless allow_zero), and x*ell(x) must be convex on an
/// integer grid. Trailing zero coefficients are trimmed so degree() is the
/// index of the highest active term.
class PolyLatency {
 public:
  static constexpr int kDefaultMaxDegree = 8;

  explicit PolyLatency(std::vector<double> coeffs, bool allow_zero = false);

  /// ell(x).
  double operator()(double x) const;

  /// c(x) = x * ell(x), the per-resource contribution to the social cost.
  double cost(double x) const { return x * (*this)(x); }

  /// Index of the highest non-zero coefficient (0 for the zero latency).
  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }

  bool is_zero() const;

  std::span<const double> coeffs() const { return coeffs_; }

  bool operator==(const PolyLatency&) const = default;

 private:
  std::vector<double> coeffs_;
};

}  // namespace congestion
