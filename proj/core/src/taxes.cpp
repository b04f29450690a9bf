#include "congestion/taxes.hpp"

#include <cmath>
#include <string>

#include "congestion/errors.hpp"
#include "congestion/poisson.hpp"

namespace congestion {
namespace {

double horner(const std::vector<double>& coeffs, double x) {
  double acc = 0.0;
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) {
    acc = acc * x + *it;
  }
  return acc;
}

void check_beta(int degree, const std::vector<double>& beta) {
  if (degree < 0) throw ValidationError("degree must be >= 0");
  if (static_cast<int>(beta.size()) < degree && degree > 0) {
    throw ValidationError("need beta_0..beta_" + std::to_string(degree - 1) +
                          " for degree " + std::to_string(degree));
  }
}

double clamp_probability(double p, const char* what) {
  if (!std::isfinite(p) || p < -1e-9 || p > 1.0 + 1e-9) {
    throw ValidationError(std::string(what) + " " + std::to_string(p) +
                          " outside [0, 1]");
  }
  return std::min(1.0, std::max(0.0, p));
}

}  // namespace

double MonomialTax::operator()(double x) const { return horner(alpha, x); }

std::vector<double> alpha_coeffs(int degree, const std::vector<double>& beta) {
  check_beta(degree, beta);
  const auto binom = binomial_coefficients(degree);
  std::vector<double> alpha(static_cast<std::size_t>(degree) + 1, 0.0);
  alpha[degree] = 1.0;
  for (int j = degree; j >= 1; --j) {
    double sum = 0.0;
    for (int k = j; k <= degree; ++k) {
      sum += binom[k][j] * alpha[k] * beta[static_cast<std::size_t>(k - j)];
    }
    alpha[j - 1] = sum;
  }
  return alpha;
}

std::vector<double> alpha_tilde_coeffs(int degree,
                                       const std::vector<double>& beta) {
  check_beta(degree, beta);
  const auto binom = binomial_coefficients(degree + 1);
  // table[p] holds the coefficients for the degree-p replacement; each layer
  // only consults strictly lower layers.
  std::vector<std::vector<double>> table(static_cast<std::size_t>(degree) + 1);
  for (int d = 0; d <= degree; ++d) {
    table[d].assign(static_cast<std::size_t>(d) + 1, 0.0);
    table[d][d] = 1.0;
    for (int j = 0; j < d; ++j) {
      double sum = 0.0;
      for (int p = j; p <= d - 1; ++p) {
        sum += binom[d][p + 1] * table[p][j] *
               beta[static_cast<std::size_t>(d - 1 - p)];
      }
      table[d][j] = sum;
    }
  }
  return table[degree];
}

MonomialTax make_monomial_tax(int degree, const std::vector<double>& v,
                              const std::vector<double>& weights) {
  MonomialTax tax;
  tax.degree = degree;
  tax.alpha = alpha_coeffs(
      degree, beta_vector(v, weights, degree > 0 ? degree - 1 : 0));
  return tax;
}

double TaxedLatency::operator()(double x) const { return horner(coeffs, x); }

double TaxedLatency::tax(double x) const { return horner(tax_coeffs, x); }

std::vector<TaxedLatency> build_taxed_latencies(
    const WeightedGame& game, const std::vector<std::vector<double>>& v) {
  if (v.size() != game.num_resources()) {
    throw ValidationError("marginals do not match resource count");
  }
  std::vector<TaxedLatency> out;
  out.reserve(game.num_resources());
  for (std::size_t r = 0; r < game.num_resources(); ++r) {
    if (v[r].size() != game.num_players()) {
      throw ValidationError("marginals for resource " + std::to_string(r) +
                            " do not match player count");
    }
    TaxedLatency taxed;
    taxed.resource = static_cast<int>(r);
    taxed.v.reserve(v[r].size());
    for (double p : v[r]) {
      taxed.v.push_back(clamp_probability(p, "usage probability"));
    }
    const auto b = game.resources[r].coeffs();
    const int D = game.resources[r].degree();
    const std::vector<double> beta =
        beta_vector(taxed.v, game.weights, D > 0 ? D - 1 : 0);
    // tax_k = sum_{d > k} b_d alpha_k^d; the d = k term of the perceived
    // latency is b_k itself because alpha_d^d = 1.
    taxed.tax_coeffs.assign(static_cast<std::size_t>(D) + 1, 0.0);
    for (int d = 0; d <= D; ++d) {
      if (b[static_cast<std::size_t>(d)] == 0.0) continue;
      const std::vector<double> alpha = alpha_coeffs(d, beta);
      for (int k = 0; k < d; ++k) {
        taxed.tax_coeffs[static_cast<std::size_t>(k)] +=
            b[static_cast<std::size_t>(d)] * alpha[static_cast<std::size_t>(k)];
      }
    }
    taxed.coeffs.assign(b.begin(), b.end());
    for (int k = 0; k <= D; ++k) {
      taxed.coeffs[static_cast<std::size_t>(k)] +=
          taxed.tax_coeffs[static_cast<std::size_t>(k)];
    }
    out.push_back(std::move(taxed));
  }
  return out;
}

namespace {

using quad = __float128;

quad horner_q(const std::vector<quad>& coeffs, quad x) {
  quad acc = 0;
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) {
    acc = acc * x + *it;
  }
  return acc;
}

}  // namespace

double monomial_recursion_residual(int degree, const std::vector<double>& v,
                                   const std::vector<double>& weights,
                                   double x) {
  if (v.size() != weights.size()) {
    throw ValidationError("intensities do not match weights");
  }
  if (degree < 0) throw ValidationError("degree must be >= 0");
  const std::size_t d = static_cast<std::size_t>(degree);
  const std::size_t n = v.size();
  for (std::size_t i = 0; i < n; ++i) {
    if (!(weights[i] > 0.0) || v[i] < 0.0) {
      throw ValidationError("need positive weights and non-negative "
                            "intensities");
    }
  }

  // Re-derive beta, the moments, and the alpha coefficients in quad
  // precision so the residual reflects the identity, not double round-off.
  std::vector<std::vector<quad>> binom(d + 2);
  for (std::size_t i = 0; i <= d + 1; ++i) {
    binom[i].assign(i + 1, quad{1});
    for (std::size_t j = 1; j < i; ++j) {
      binom[i][j] = binom[i - 1][j - 1] + binom[i - 1][j];
    }
  }
  std::vector<quad> beta(d + 1, quad{0});
  for (std::size_t i = 0; i < n; ++i) {
    quad pw = weights[i];
    for (std::size_t j = 0; j <= d; ++j) {
      beta[j] += quad{v[i]} * pw;
      pw *= quad{weights[i]};
    }
  }
  std::vector<quad> m(d + 2, quad{0});
  m[0] = 1;
  for (std::size_t next = 1; next <= d + 1; ++next) {
    quad sum = 0;
    for (std::size_t k = 0; k < next; ++k) {
      sum += binom[next - 1][k] * beta[next - 1 - k] * m[k];
    }
    m[next] = sum;
  }
  std::vector<quad> alpha(d + 1, quad{0});
  alpha[d] = 1;
  for (std::size_t j = d; j >= 1; --j) {
    quad sum = 0;
    for (std::size_t k = j; k <= d; ++k) {
      sum += binom[k][j] * alpha[k] * beta[k - j];
    }
    alpha[j - 1] = sum;
  }

  quad lhs = quad{x} * horner_q(alpha, x);
  for (std::size_t i = 0; i < n; ++i) {
    lhs -= quad{v[i]} * quad{weights[i]} *
           horner_q(alpha, quad{x} + quad{weights[i]});
  }
  quad xpow = 1;
  for (std::size_t k = 0; k <= d; ++k) xpow *= quad{x};
  const quad rhs = xpow - m[d + 1];
  return static_cast<double>(lhs - rhs);
}

double taxed_recursion_residual(const WeightedGame& game,
                                const TaxedLatency& taxed, double x) {
  const std::size_t r = static_cast<std::size_t>(taxed.resource);
  if (r >= game.num_resources()) {
    throw ValidationError("taxed latency references unknown resource");
  }
  double lhs = x * taxed(x);
  for (std::size_t i = 0; i < game.num_players(); ++i) {
    lhs -= game.weights[i] * taxed.v[i] * taxed(x + game.weights[i]);
  }
  const double rhs = game.resources[r].cost(x) -
                     expected_cost(game.resources[r], taxed.v, game.weights);
  return lhs - rhs;
}

RecursionSweep taxed_recursion_sweep(const WeightedGame& game,
                                     const std::vector<TaxedLatency>& taxed,
                                     const std::vector<double>& x_grid) {
  RecursionSweep sweep;
  for (const TaxedLatency& t : taxed) {
    for (double x : x_grid) {
      const double res = std::abs(taxed_recursion_residual(game, t, x));
      if (res > sweep.max_abs_residual) {
        sweep.max_abs_residual = res;
        sweep.worst_x = x;
        sweep.worst_resource = t.resource;
      }
    }
  }
  return sweep;
}

}  // namespace congestion
