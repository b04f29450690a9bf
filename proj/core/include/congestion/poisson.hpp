#pragma once

#include <cstdint>
#include <vector>

#include "congestion/game.hpp"
#include "congestion/latency.hpp"
#include "congestion/rng.hpp"

namespace congestion {

// Highest moment order the exact integer/floating machinery supports.  The
// (n+1)-st moment of a unit Poisson equals the (n+1)-st Bell number, and
// Bell numbers overflow int64 beyond index 25.
inline constexpr int kMaxMomentOrder = 25;

// Bell numbers B_0..B_n as exact 64-bit integers (n <= kMaxMomentOrder).
std::vector<std::int64_t> bell_numbers(int n);

// Pascal's triangle C(i, j) for 0 <= j <= i <= n as exact doubles.
std::vector<std::vector<double>> binomial_coefficients(int n);

// beta_j = sum_i v_i * w_i^(j+1) for j = 0..j_max.  `v` holds one Poisson
// intensity per player; any non-negative value is allowed.
std::vector<double> beta_vector(const std::vector<double>& v,
                                const std::vector<double>& weights, int j_max);

// Raw moments M_0..M_n of sum_i w_i * Poi(v_i):
//   M_0 = 1,  M_{n+1} = sum_{k=0}^{n} C(n, k) beta_{n-k} M_k.
std::vector<double> poisson_mixture_moments(const std::vector<double>& v,
                                            const std::vector<double>& weights,
                                            int n);

// Expected congestion cost E[c(sum_i w_i P_i)] with c(x) = x * ell(x) and
// P_i ~ Poi(v_i) independent: sum_d b_d M_{d+1}.
double expected_cost(const PolyLatency& ell, const std::vector<double>& v,
                     const std::vector<double>& weights);

// Worst-case ratio sup_{t>0} E[t P ell(t P)] / (t ell(t)) with P ~ Poi(1).
// For a polynomial of degree D this equals the Bell number B_{D+1}.
double rho_factor(const PolyLatency& ell);
double rho_factor(const WeightedGame& game);

// The ratio at one point t > 0 (the expression under the sup above).
double rho_ratio_at(const PolyLatency& ell, double t);

// Exact comparison of E[Poi(x)^(d+1)] against x^(d+1) * B_{d+1}, the moment
// of x * Poi(1).  Convex order predicts lhs <= rhs for every x >= 1 (below
// 1 the inequality genuinely reverses, so such x are rejected).
struct ConvexOrderReport {
  double lhs = 0.0;
  double rhs = 0.0;
  double slack = 0.0;  // rhs - lhs
};
ConvexOrderReport convex_order_check(double x, int d);

// Draws sum_i w_i P_i with independent P_i ~ Poi(v_i).
class MixtureSampler {
 public:
  MixtureSampler(std::vector<double> v, std::vector<double> weights);
  double sample(SplitMix64& rng) const;

 private:
  std::vector<double> v_;
  std::vector<double> weights_;
};

}  // namespace congestion
