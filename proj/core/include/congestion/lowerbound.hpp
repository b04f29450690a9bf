#pragma once

#include <cstdint>
#include <vector>

#include "congestion/game.hpp"
#include "congestion/latency.hpp"

namespace congestion {

// m unit-weight players choosing among m identical resources, singleton
// strategies only.
WeightedGame make_symmetric_instance(int m, const PolyLatency& ell);

// Raw moment E[X^n] of X ~ Binomial(m, p), exact via factorial moments.
double binomial_moment(int m, double p, int n);

// Exact E[sum_r c(X_r)] when each of the m players independently picks
// resource r with probability y_r, so X_r ~ Binomial(m, y_r).
double symmetric_mixed_cost(int m, const PolyLatency& ell,
                            const std::vector<double>& y);

double uniform_mixed_cost(int m, const PolyLatency& ell);

// Uniform mixed cost divided by the optimum m * ell(1) (one player per
// resource; optimal because the congestion cost is convex and zero at zero).
double uniform_ratio(int m, const PolyLatency& ell);

// uniform_ratio for m = 1..m_max.
std::vector<double> uniform_ratio_curve(int m_max, const PolyLatency& ell);

struct MinimizerReport {
  double uniform_cost = 0.0;
  double candidate_cost = 0.0;
  double gap = 0.0;  // candidate - uniform; >= 0 when uniform minimizes
};

MinimizerReport check_uniform_minimizer(int m, const PolyLatency& ell,
                                        const std::vector<double>& y);

struct MinimizerSweep {
  int trials = 0;
  double uniform_cost = 0.0;
  double min_gap = 0.0;  // most adverse candidate - uniform over all trials
  bool pass(double tol = 1e-10) const { return min_gap >= -tol; }
};

// Compares the uniform profile against `trials` random probability vectors
// (normalized exponentials from a deterministic seed).
MinimizerSweep random_minimizer_sweep(int m, const PolyLatency& ell,
                                      int trials, std::uint64_t seed);

}  // namespace congestion
