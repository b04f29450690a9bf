#include <cmath>
#include <cstddef>
#include <vector>

#include "congestion/errors.hpp"
#include "congestion/game.hpp"
#include "congestion/latency.hpp"
#include "congestion/lowerbound.hpp"
#include "congestion/rng.hpp"
#include "doctest.h"

using namespace congestion;

namespace {

// pmf-weighted power sum, built from the multiplicative pmf recurrence.
double pmf_moment(int m, double p, int n) {
  if (p <= 0.0) return n == 0 ? 1.0 : 0.0;
  if (p >= 1.0) return std::pow(static_cast<double>(m), n);
  double pmf = std::pow(1.0 - p, m);
  double total = pmf * (n == 0 ? 1.0 : 0.0);
  for (int k = 1; k <= m; ++k) {
    pmf *= static_cast<double>(m - k + 1) / static_cast<double>(k) * p /
           (1.0 - p);
    total += pmf * std::pow(static_cast<double>(k), n);
  }
  return total;
}

// Exhaustive expectation over all m^m joint resource choices.
double joint_mixed_cost(int m, const PolyLatency& ell,
                        const std::vector<double>& y) {
  const WeightedGame game = make_symmetric_instance(m, ell);
  std::vector<int> choice(m, 0);
  double total = 0.0;
  while (true) {
    double prob = 1.0;
    for (int i = 0; i < m; ++i) prob *= y[static_cast<std::size_t>(choice[i])];
    total += prob * social_cost(game, Allocation{choice});
    int pos = m - 1;
    while (pos >= 0 && choice[pos] + 1 == m) {
      choice[pos] = 0;
      --pos;
    }
    if (pos < 0) break;
    ++choice[pos];
  }
  return total;
}

}  // namespace

TEST_CASE("binomial moments: pmf oracle and closed forms") {
  SplitMix64 rng(13);
  for (int trial = 0; trial < 80; ++trial) {
    const int m = 1 + static_cast<int>(rng.below(30));
    const double p = rng.uniform01();
    for (int n = 0; n <= 6; ++n) {
      const double exact = binomial_moment(m, p, n);
      const double oracle = pmf_moment(m, p, n);
      CHECK(exact == doctest::Approx(oracle).epsilon(1e-10));
    }
    const double mp = static_cast<double>(m) * p;
    CHECK(binomial_moment(m, p, 1) == doctest::Approx(mp).epsilon(1e-12));
    CHECK(binomial_moment(m, p, 2) ==
          doctest::Approx(mp + static_cast<double>(m) *
                                   static_cast<double>(m - 1) * p * p)
              .epsilon(1e-12));
  }
  CHECK(binomial_moment(5, 0.0, 3) == 0.0);
  CHECK(binomial_moment(5, 0.0, 0) == 1.0);
  CHECK(binomial_moment(4, 1.0, 2) == doctest::Approx(16.0));
  CHECK_THROWS_AS(binomial_moment(3, 1.5, 2), ValidationError);
  CHECK_THROWS_AS(binomial_moment(3, 0.5, -1), ValidationError);
}

TEST_CASE("the symmetric family is a valid singleton game") {
  const PolyLatency ell({0.0, 1.0, 0.5});
  const WeightedGame game = make_symmetric_instance(6, ell);
  CHECK_NOTHROW(game.validate());
  CHECK(game.num_players() == 6);
  CHECK(game.num_resources() == 6);
  for (double w : game.weights) CHECK(w == 1.0);
  for (const auto& actions : game.strategies) {
    CHECK(actions.size() == 6);
    for (const auto& a : actions) CHECK(a.size() == 1);
  }
  // One player per resource costs m * ell(1).
  Allocation spread{{0, 1, 2, 3, 4, 5}};
  CHECK(social_cost(game, spread) == doctest::Approx(6.0 * ell(1.0)));
  CHECK_THROWS_AS(make_symmetric_instance(0, ell), ValidationError);
  CHECK_THROWS_AS(make_symmetric_instance(2001, ell), ResourceLimitError);
  CHECK_THROWS_AS(make_symmetric_instance(200001, ell), ResourceLimitError);
}

TEST_CASE("mixed cost equals the exhaustive joint expectation") {
  SplitMix64 rng(29);
  const PolyLatency linear({0.0, 1.0});
  const PolyLatency cubicish({0.2, 0.7, 0.0, 0.3});
  for (const PolyLatency& ell : {linear, cubicish}) {
    for (int trial = 0; trial < 6; ++trial) {
      for (int m : {3, 4}) {
        std::vector<double> y(m);
        double sum = 0.0;
        for (double& p : y) {
          p = 0.05 + rng.uniform01();
          sum += p;
        }
        for (double& p : y) p /= sum;
        CHECK(symmetric_mixed_cost(m, ell, y) ==
              doctest::Approx(joint_mixed_cost(m, ell, y)).epsilon(1e-10));
      }
    }
  }
  // Uniform helper is the same computation at y = (1/m, ..., 1/m).
  const std::vector<double> u(4, 0.25);
  CHECK(uniform_mixed_cost(4, linear) ==
        doctest::Approx(symmetric_mixed_cost(4, linear, u)).epsilon(1e-12));
}

TEST_CASE("probability vector validation") {
  const PolyLatency ell({0.0, 1.0});
  CHECK_THROWS_AS(symmetric_mixed_cost(3, ell, {0.5, 0.5}), ValidationError);
  CHECK_THROWS_AS(symmetric_mixed_cost(2, ell, {0.7, 0.2}), ValidationError);
  CHECK_THROWS_AS(symmetric_mixed_cost(2, ell, {1.2, -0.2}),
                  ValidationError);
}

TEST_CASE("uniform ratio: linear closed form and limits") {
  const PolyLatency linear({0.0, 1.0});
  for (int m : {1, 2, 3, 10, 100, 1000}) {
    CHECK(uniform_ratio(m, linear) ==
          doctest::Approx(2.0 - 1.0 / static_cast<double>(m))
              .epsilon(1e-12));
  }
  CHECK(uniform_ratio(100, linear) == doctest::Approx(1.99).epsilon(1e-12));

  const PolyLatency quadratic({0.0, 0.0, 1.0});
  const auto curve_lin = uniform_ratio_curve(60, linear);
  const auto curve_quad = uniform_ratio_curve(60, quadratic);
  REQUIRE(curve_lin.size() == 60);
  for (std::size_t i = 1; i < curve_lin.size(); ++i) {
    CHECK(curve_lin[i] >= curve_lin[i - 1] - 1e-12);
    CHECK(curve_quad[i] >= curve_quad[i - 1] - 1e-12);
  }
  // Quadratic ratios head toward the degree-2 worst case B_3 = 5.
  CHECK(curve_quad.back() > 4.5);
  CHECK(uniform_ratio(1000, quadratic) == doctest::Approx(5.0).epsilon(0.01));

  CHECK_THROWS_AS(uniform_ratio(3, PolyLatency({0.0}, true)),
                  ValidationError);
}

TEST_CASE("the uniform profile minimizes the mixed cost") {
  SplitMix64 rng(71);
  const PolyLatency linear({0.0, 1.0});
  const PolyLatency quadratic({0.0, 0.0, 1.0});
  for (const PolyLatency& ell : {linear, quadratic}) {
    for (int trial = 0; trial < 50; ++trial) {
      std::vector<double> y(5);
      double sum = 0.0;
      for (double& p : y) {
        p = -std::log(1.0 - rng.uniform01());
        sum += p;
      }
      for (double& p : y) p /= sum;
      const MinimizerReport report = check_uniform_minimizer(5, ell, y);
      CHECK(report.gap >= -1e-10);
      CHECK(report.candidate_cost ==
            doctest::Approx(report.uniform_cost + report.gap)
                .epsilon(1e-12));
    }
    const MinimizerSweep sweep = random_minimizer_sweep(5, ell, 200, 2026);
    CHECK(sweep.trials == 200);
    CHECK(sweep.pass());
    CHECK(sweep.uniform_cost ==
          doctest::Approx(uniform_mixed_cost(5, ell)).epsilon(1e-12));
  }
  CHECK_THROWS_AS(random_minimizer_sweep(5, linear, 0, 1), ValidationError);
}
