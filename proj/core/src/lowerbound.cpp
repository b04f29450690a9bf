#include "congestion/lowerbound.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "congestion/errors.hpp"
#include "congestion/rng.hpp"

namespace congestion {
namespace {

constexpr int kMaxPlayers = 100000;

void check_m(int m) {
  if (m < 1) throw ValidationError("need at least one player");
  if (m > kMaxPlayers) {
    throw ResourceLimitError("symmetric family capped at " +
                             std::to_string(kMaxPlayers) + " players");
  }
}

// Stirling numbers of the second kind S(i, j) for i, j <= n.
std::vector<std::vector<double>> stirling2(int n) {
  std::vector<std::vector<double>> s(static_cast<std::size_t>(n) + 1);
  for (int i = 0; i <= n; ++i) {
    s[i].assign(static_cast<std::size_t>(n) + 1, 0.0);
  }
  s[0][0] = 1.0;
  for (int i = 1; i <= n; ++i) {
    for (int j = 1; j <= i; ++j) {
      s[i][j] = j * s[i - 1][j] + s[i - 1][j - 1];
    }
  }
  return s;
}

}  // namespace

WeightedGame make_symmetric_instance(int m, const PolyLatency& ell) {
  check_m(m);
  if (m > 2000) {
    throw ResourceLimitError("explicit game construction capped at 2000 "
                             "players");
  }
  WeightedGame game;
  game.delta = 1.0;
  game.weights.assign(m, 1.0);
  game.resources.assign(m, ell);
  std::vector<std::vector<int>> singletons;
  singletons.reserve(m);
  for (int r = 0; r < m; ++r) singletons.push_back({r});
  game.strategies.assign(m, singletons);
  return game;
}

double binomial_moment(int m, double p, int n) {
  check_m(m);
  if (n < 0) throw ValidationError("moment order must be >= 0");
  if (!(p >= 0.0) || !(p <= 1.0)) {
    throw ValidationError("probability outside [0, 1]");
  }
  // E[X^n] = sum_k S(n, k) * m falling k * p^k, exact for polynomials.
  const auto s = stirling2(n);
  double total = 0.0;
  double falling = 1.0;
  double pk = 1.0;
  for (int k = 0; k <= n; ++k) {
    if (k > 0) {
      falling *= static_cast<double>(m - (k - 1));
      pk *= p;
      if (m < k) falling = 0.0;
    }
    total += s[n][k] * falling * pk;
  }
  return total;
}

double symmetric_mixed_cost(int m, const PolyLatency& ell,
                            const std::vector<double>& y) {
  check_m(m);
  if (static_cast<int>(y.size()) != m) {
    throw ValidationError("probability vector must have one entry per "
                          "resource");
  }
  double sum = 0.0;
  for (double p : y) {
    if (!(p >= 0.0) || !(p <= 1.0 + 1e-12)) {
      throw ValidationError("probability outside [0, 1]");
    }
    sum += p;
  }
  if (std::abs(sum - 1.0) > 1e-9) {
    throw ValidationError("probabilities must sum to 1");
  }
  const auto b = ell.coeffs();
  double total = 0.0;
  for (double p : y) {
    const double q = std::min(1.0, p);
    for (int d = 0; d <= ell.degree(); ++d) {
      total += b[static_cast<std::size_t>(d)] * binomial_moment(m, q, d + 1);
    }
  }
  return total;
}

double uniform_mixed_cost(int m, const PolyLatency& ell) {
  check_m(m);
  // All m resources behave identically under the uniform profile.
  const double p = 1.0 / static_cast<double>(m);
  const auto b = ell.coeffs();
  double per_resource = 0.0;
  for (int d = 0; d <= ell.degree(); ++d) {
    per_resource +=
        b[static_cast<std::size_t>(d)] * binomial_moment(m, p, d + 1);
  }
  return static_cast<double>(m) * per_resource;
}

double uniform_ratio(int m, const PolyLatency& ell) {
  if (ell.is_zero()) {
    throw ValidationError("ratio is undefined for the zero latency");
  }
  const double opt = static_cast<double>(m) * ell(1.0);
  return uniform_mixed_cost(m, ell) / opt;
}

std::vector<double> uniform_ratio_curve(int m_max, const PolyLatency& ell) {
  check_m(m_max);
  std::vector<double> curve;
  curve.reserve(m_max);
  for (int m = 1; m <= m_max; ++m) curve.push_back(uniform_ratio(m, ell));
  return curve;
}

MinimizerReport check_uniform_minimizer(int m, const PolyLatency& ell,
                                        const std::vector<double>& y) {
  MinimizerReport report;
  report.uniform_cost = uniform_mixed_cost(m, ell);
  report.candidate_cost = symmetric_mixed_cost(m, ell, y);
  report.gap = report.candidate_cost - report.uniform_cost;
  return report;
}

MinimizerSweep random_minimizer_sweep(int m, const PolyLatency& ell,
                                      int trials, std::uint64_t seed) {
  if (trials < 1) throw ValidationError("need at least one trial");
  MinimizerSweep sweep;
  sweep.trials = trials;
  sweep.uniform_cost = uniform_mixed_cost(m, ell);
  sweep.min_gap = std::numeric_limits<double>::infinity();
  SplitMix64 rng(seed);
  std::vector<double> y(static_cast<std::size_t>(m), 0.0);
  for (int trial = 0; trial < trials; ++trial) {
    double total = 0.0;
    for (double& p : y) {
      p = -std::log(1.0 - rng.uniform01());  // Exp(1), normalized below
      total += p;
    }
    for (double& p : y) p /= total;
    const double cost = symmetric_mixed_cost(m, ell, y);
    sweep.min_gap = std::min(sweep.min_gap, cost - sweep.uniform_cost);
  }
  return sweep;
}

}  // namespace congestion
