#include "congestion/poisson.hpp"

#include <cmath>
#include <string>

#include "congestion/errors.hpp"

namespace congestion {
namespace {

void check_order(int n, const char* what) {
  if (n < 0) throw ValidationError(std::string(what) + " must be >= 0");
  if (n > kMaxMomentOrder) {
    throw NumericRangeError(std::string(what) + " " + std::to_string(n) +
                            " exceeds the exact-arithmetic limit " +
                            std::to_string(kMaxMomentOrder));
  }
}

// Moments M_0..M_n of a weighted sum of independent Poissons described by
// beta_j = sum_i lambda_i * w_i^(j+1).
std::vector<double> moments_from_beta(const std::vector<double>& beta, int n) {
  const auto binom = binomial_coefficients(n);
  std::vector<double> m(static_cast<std::size_t>(n) + 1, 0.0);
  m[0] = 1.0;
  for (int next = 1; next <= n; ++next) {
    const int prev = next - 1;
    double sum = 0.0;
    for (int k = 0; k <= prev; ++k) {
      sum += binom[prev][k] * beta[static_cast<std::size_t>(prev - k)] * m[k];
    }
    m[static_cast<std::size_t>(next)] = sum;
  }
  return m;
}

}  // namespace

std::vector<std::int64_t> bell_numbers(int n) {
  check_order(n, "Bell index");
  // Bell triangle: row k starts with the last entry of row k-1, and each
  // entry adds its left neighbour to the entry above it.
  std::vector<std::int64_t> bell{1};
  std::vector<std::int64_t> row{1};
  for (int k = 1; k <= n; ++k) {
    // B_k is already the last entry of row k-1; only extend the triangle
    // when a further row is needed (row k ends at B_{k+1}, which may
    // overflow even though B_k fits).
    bell.push_back(row.back());
    if (k == n) break;
    std::vector<std::int64_t> next(row.size() + 1);
    next[0] = row.back();
    for (std::size_t j = 0; j < row.size(); ++j) {
      if (__builtin_add_overflow(next[j], row[j], &next[j + 1])) {
        throw NumericRangeError("Bell number overflow at index " +
                                std::to_string(k + 1));
      }
    }
    row = std::move(next);
  }
  return bell;
}

std::vector<std::vector<double>> binomial_coefficients(int n) {
  if (n < 0) throw ValidationError("binomial table size must be >= 0");
  std::vector<std::vector<double>> c(static_cast<std::size_t>(n) + 1);
  for (int i = 0; i <= n; ++i) {
    c[i].assign(static_cast<std::size_t>(i) + 1, 1.0);
    for (int j = 1; j < i; ++j) c[i][j] = c[i - 1][j - 1] + c[i - 1][j];
  }
  return c;
}

std::vector<double> beta_vector(const std::vector<double>& v,
                                const std::vector<double>& weights,
                                int j_max) {
  if (v.size() != weights.size()) {
    throw ValidationError("per-player probabilities do not match weights");
  }
  if (j_max < 0) throw ValidationError("beta order must be >= 0");
  std::vector<double> clamped(v);
  for (std::size_t i = 0; i < clamped.size(); ++i) {
    if (!(weights[i] > 0.0) || !std::isfinite(weights[i])) {
      throw ValidationError("weights must be positive");
    }
    if (!std::isfinite(clamped[i]) || clamped[i] < -1e-9) {
      throw ValidationError("Poisson intensity " + std::to_string(clamped[i]) +
                            " is negative");
    }
    clamped[i] = std::max(0.0, clamped[i]);
  }
  std::vector<double> beta(static_cast<std::size_t>(j_max) + 1, 0.0);
  std::vector<double> pw(weights.begin(), weights.end());
  for (int j = 0; j <= j_max; ++j) {
    double sum = 0.0;
    for (std::size_t i = 0; i < clamped.size(); ++i) {
      sum += clamped[i] * pw[i];
      pw[i] *= weights[i];
    }
    beta[static_cast<std::size_t>(j)] = sum;
  }
  return beta;
}

std::vector<double> poisson_mixture_moments(const std::vector<double>& v,
                                            const std::vector<double>& weights,
                                            int n) {
  check_order(n, "moment order");
  const std::vector<double> beta =
      beta_vector(v, weights, n > 0 ? n - 1 : 0);
  return moments_from_beta(beta, n);
}

double expected_cost(const PolyLatency& ell, const std::vector<double>& v,
                     const std::vector<double>& weights) {
  const int n = ell.degree() + 1;
  const std::vector<double> m = poisson_mixture_moments(v, weights, n);
  const auto b = ell.coeffs();
  double sum = 0.0;
  for (int d = 0; d <= ell.degree(); ++d) {
    sum += b[static_cast<std::size_t>(d)] * m[static_cast<std::size_t>(d) + 1];
  }
  return sum;
}

double rho_factor(const PolyLatency& ell) {
  if (ell.is_zero()) {
    throw ValidationError("approximation factor is undefined for the zero "
                          "latency");
  }
  check_order(ell.degree() + 1, "moment order");
  const auto bell = bell_numbers(ell.degree() + 1);
  return static_cast<double>(bell.back());
}

double rho_factor(const WeightedGame& game) {
  if (game.resources.empty()) throw ValidationError("game has no resources");
  double rho = 0.0;
  for (const PolyLatency& ell : game.resources) {
    rho = std::max(rho, rho_factor(ell));
  }
  return rho;
}

double rho_ratio_at(const PolyLatency& ell, double t) {
  if (!(t > 0.0) || !std::isfinite(t)) {
    throw ValidationError("ratio point must be positive");
  }
  if (ell.is_zero()) {
    throw ValidationError("ratio is undefined for the zero latency");
  }
  const auto bell = bell_numbers(ell.degree() + 1);
  const auto b = ell.coeffs();
  // E[t P ell(t P)] = sum_d b_d t^(d+1) E[P^(d+1)] with P ~ Poi(1), whose
  // (d+1)-st moment is the Bell number B_{d+1}.
  double numer = 0.0;
  double denom = 0.0;
  double tpow = t;
  for (int d = 0; d <= ell.degree(); ++d) {
    const double term = b[static_cast<std::size_t>(d)] * tpow * t;
    numer += term * static_cast<double>(bell[static_cast<std::size_t>(d) + 1]);
    denom += term;
    tpow *= t;
  }
  return numer / denom;
}

ConvexOrderReport convex_order_check(double x, int d) {
  if (!(x >= 1.0) || !std::isfinite(x)) {
    throw ValidationError("scale must be >= 1");
  }
  check_order(d + 1, "moment order");
  // E[Poi(x)^n] follows the same recursion with beta_j = x for every j.
  std::vector<double> beta(static_cast<std::size_t>(d) + 1, x);
  const std::vector<double> m = moments_from_beta(beta, d + 1);
  const auto bell = bell_numbers(d + 1);
  ConvexOrderReport report;
  report.lhs = m.back();
  report.rhs = std::pow(x, d + 1) * static_cast<double>(bell.back());
  report.slack = report.rhs - report.lhs;
  return report;
}

MixtureSampler::MixtureSampler(std::vector<double> v,
                               std::vector<double> weights)
    : v_(std::move(v)), weights_(std::move(weights)) {
  beta_vector(v_, weights_, 0);  // validates sizes and ranges
  for (double& p : v_) p = std::max(0.0, p);
}

double MixtureSampler::sample(SplitMix64& rng) const {
  double total = 0.0;
  for (std::size_t i = 0; i < v_.size(); ++i) {
    if (v_[i] <= 0.0) continue;
    // Knuth's product method; fine for intensities in [0, 1].
    const double limit = std::exp(-v_[i]);
    int count = -1;
    double prod = 1.0;
    do {
      prod *= rng.uniform01();
      ++count;
    } while (prod > limit);
    total += weights_[i] * count;
  }
  return total;
}

}  // namespace congestion
