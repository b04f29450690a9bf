#include "congestion/latency.hpp"

#include <cmath>
#include <string>

#include "congestion/errors.hpp"

namespace congestion {
namespace {

constexpr int kConvexityGrid = 12;

}  // namespace

PolyLatency::PolyLatency(std::vector<double> coeffs, bool allow_zero)
    : coeffs_(std::move(coeffs)) {
  if (coeffs_.empty()) {
    throw ValidationError("latency needs at least one coefficient");
  }
  for (double b : coeffs_) {
    if (!std::isfinite(b) || b < 0.0) {
      throw ValidationError("latency coefficients must be finite and >= 0, got " +
                            std::to_string(b));
    }
  }
  while (coeffs_.size() > 1 && coeffs_.back() == 0.0) {
    coeffs_.pop_back();
  }
  if (is_zero() && !allow_zero) {
    throw ValidationError("zero latency rejected (pass allow_zero to permit it)");
  }
  // Non-negative coefficients already imply discrete convexity of x*ell(x);
  // checked anyway so a future coefficient source cannot regress it.
  double prev_delta = cost(1.0) - cost(0.0);
  for (int k = 1; k < kConvexityGrid; ++k) {
    const double delta = cost(k + 1.0) - cost(static_cast<double>(k));
    if (delta < prev_delta - 1e-9) {
      throw ValidationError("x*ell(x) is not convex on the integer grid");
    }
    prev_delta = delta;
  }
}

double PolyLatency::operator()(double x) const {
  double acc = 0.0;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) {
    acc = acc * x + *it;
  }
  return acc;
}

bool PolyLatency::is_zero() const {
  return coeffs_.size() == 1 && coeffs_[0] == 0.0;
}

}  // namespace congestion
