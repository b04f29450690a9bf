#pragma once

#include <vector>

#include "congestion/game.hpp"
#include "congestion/latency.hpp"

namespace congestion {

// Perceived-cost replacement for one monomial x^d under usage probabilities
// v: T_d(x; v) = sum_k alpha_k x^k with alpha_d = 1.
struct MonomialTax {
  int degree = 0;
  std::vector<double> alpha;
  double operator()(double x) const;
};

// Coefficients alpha_k via the top-down recursion
//   alpha_d = 1,   alpha_{j-1} = sum_{k=j}^{d} C(k, j) alpha_k beta_{k-j}.
std::vector<double> alpha_coeffs(int degree, const std::vector<double>& beta);

// The same coefficients built bottom-up across all lower degrees:
//   alpha~_d^d = 1,   alpha~_j^d = sum_{p=j}^{d-1} C(d, p+1) alpha~_j^p
//                                   beta_{d-1-p}.
std::vector<double> alpha_tilde_coeffs(int degree,
                                       const std::vector<double>& beta);

MonomialTax make_monomial_tax(int degree, const std::vector<double>& v,
                              const std::vector<double>& weights);

// A resource's latency with its load-dependent tax folded in.
struct TaxedLatency {
  int resource = 0;
  std::vector<double> coeffs;      // perceived latency = base + tax
  std::vector<double> tax_coeffs;  // the added tax polynomial, all >= 0
  std::vector<double> v;           // per-player usage probabilities

  double operator()(double x) const;
  double tax(double x) const;
  PolyLatency latency() const { return PolyLatency(coeffs); }
};

// Per-resource taxes from fractional usage marginals v[r][i].  Marginals may
// stray from [0, 1] by at most 1e-9 (solver round-off) and are clamped.
std::vector<TaxedLatency> build_taxed_latencies(
    const WeightedGame& game, const std::vector<std::vector<double>>& v);

// x T_d(x; v) - sum_i v_i w_i T_d(x + w_i; v) - (x^{d+1} - M_{d+1}(v)).
// Zero certifies the defining property of T_d.  Evaluated in quad precision
// internally: the two sides cancel catastrophically in double once moments
// reach ~1e10, and the identity should hold to tiny absolute error.
double monomial_recursion_residual(int degree, const std::vector<double>& v,
                                   const std::vector<double>& weights,
                                   double x);

// x lbar(x) - sum_i w_i v_i lbar(x + w_i) - (c_r(x) - p_r(v)) for the taxed
// latency lbar; zero certifies the full per-resource recursion.
double taxed_recursion_residual(const WeightedGame& game,
                                const TaxedLatency& taxed, double x);

struct RecursionSweep {
  double max_abs_residual = 0.0;
  double worst_x = 0.0;
  int worst_resource = 0;
};

// Largest |taxed_recursion_residual| over every resource and grid point.
RecursionSweep taxed_recursion_sweep(const WeightedGame& game,
                                     const std::vector<TaxedLatency>& taxed,
                                     const std::vector<double>& x_grid);

}  // namespace congestion
