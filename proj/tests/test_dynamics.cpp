#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <vector>

#include "congestion/dynamics.hpp"
#include "congestion/errors.hpp"
#include "congestion/game.hpp"
#include "congestion/poisson.hpp"
#include "congestion/relaxation.hpp"
#include "congestion/rng.hpp"
#include "congestion/taxes.hpp"
#include "doctest.h"
#include "test_util.hpp"

using namespace congestion;

namespace {

WeightedGame split_instance() {
  WeightedGame game;
  game.delta = 1.0;
  game.weights = {1.0, 1.0};
  game.resources = {PolyLatency({0.0, 1.0}), PolyLatency({0.0, 1.0})};
  game.strategies = {{{0}, {1}}, {{0}, {1}}};
  return game;
}

std::vector<PolyLatency> base_latencies(const WeightedGame& game) {
  return game.resources;
}

// Recursive exhaustive minimum, independent of the library's odometer scan.
void opt_recurse(const WeightedGame& game, Allocation& a, std::size_t i,
                 double& best) {
  if (i == game.num_players()) {
    best = std::min(best, social_cost(game, a));
    return;
  }
  for (std::size_t k = 0; k < game.strategies[i].size(); ++k) {
    a.choice[i] = static_cast<int>(k);
    opt_recurse(game, a, i + 1, best);
  }
}

double recursive_opt(const WeightedGame& game) {
  Allocation a;
  a.choice.assign(game.num_players(), 0);
  double best = std::numeric_limits<double>::infinity();
  opt_recurse(game, a, 0, best);
  return best;
}

}  // namespace

TEST_CASE("hedge splits the two-player load-balancing instance") {
  const WeightedGame game = split_instance();
  DynamicsConfig config;
  config.rounds = 4000;
  config.seed = 17;
  const EquilibriumProfile profile =
      hedge_dynamics(game, base_latencies(game), config);

  REQUIRE(profile.history.size() == config.rounds);
  CHECK(profile.rounds == config.rounds);
  CHECK(profile.seed == config.seed);

  const BestPure best = extract_best_pure(game, profile);
  CHECK(best.social_cost == doctest::Approx(2.0).epsilon(1e-12));

  const OptResult opt = brute_force_opt(game);
  CHECK(opt.social_cost == doctest::Approx(2.0).epsilon(1e-12));
  const CertifyReport cert =
      certify_ratio(game, best.social_cost, opt.social_cost, 0.05);
  CHECK(cert.pass);
  CHECK(cert.ratio == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(cert.rho == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("play is deterministic in the seed") {
  const WeightedGame game = split_instance();
  DynamicsConfig config;
  config.rounds = 300;
  config.seed = 5;
  const auto a = hedge_dynamics(game, base_latencies(game), config);
  const auto b = hedge_dynamics(game, base_latencies(game), config);
  REQUIRE(a.history.size() == b.history.size());
  for (std::size_t t = 0; t < a.history.size(); ++t) {
    CHECK(a.history[t].choice == b.history[t].choice);
  }
  config.seed = 6;
  const auto c = hedge_dynamics(game, base_latencies(game), config);
  bool any_diff = false;
  for (std::size_t t = 0; t < a.history.size(); ++t) {
    if (a.history[t].choice != c.history[t].choice) any_diff = true;
  }
  CHECK(any_diff);
}

TEST_CASE("regret summary reproduces the trace accumulators") {
  SplitMix64 rng(404);
  for (int trial = 0; trial < 8; ++trial) {
    const WeightedGame game = testutil::random_instance(rng);
    DynamicsConfig config;
    config.rounds = 500;
    config.seed = 1000 + static_cast<std::uint64_t>(trial);
    const auto perceived = base_latencies(game);
    const EquilibriumProfile profile =
        hedge_dynamics(game, perceived, config);
    const RegretReport report = summarize_regret(game, perceived, profile);

    REQUIRE(report.realized.size() == game.num_players());
    double expected_weighted = 0.0;
    double expected_max = 0.0;
    for (std::size_t i = 0; i < game.num_players(); ++i) {
      CHECK(report.realized[i] ==
            doctest::Approx(profile.avg_realized[i]).epsilon(1e-12));
      CHECK(report.regret[i] ==
            doctest::Approx(profile.regret[i]).epsilon(1e-12));
      CHECK(report.regret[i] ==
            doctest::Approx(report.realized[i] - report.best_fixed[i])
                .epsilon(1e-12));
      expected_weighted += game.weights[i] * std::max(0.0, report.regret[i]);
      expected_max = std::max(expected_max, report.regret[i]);
    }
    CHECK(report.max_regret == doctest::Approx(expected_max).epsilon(1e-12));
    CHECK(report.weighted_regret ==
          doctest::Approx(expected_weighted).epsilon(1e-12));
  }
}

TEST_CASE("averages match an independent replay of the history") {
  SplitMix64 rng(2);
  const WeightedGame game = testutil::random_instance(rng);
  DynamicsConfig config;
  config.rounds = 50;
  config.seed = 9;
  const auto perceived = base_latencies(game);
  const EquilibriumProfile profile = hedge_dynamics(game, perceived, config);

  auto override = [&](std::size_t r, double x) { return perceived[r](x); };
  for (std::size_t i = 0; i < game.num_players(); ++i) {
    double total = 0.0;
    for (const Allocation& a : profile.history) {
      total += player_cost(game, a, i, override);
    }
    CHECK(profile.avg_realized[i] ==
          doctest::Approx(total / static_cast<double>(config.rounds))
              .epsilon(1e-10));
  }
}

TEST_CASE("a single-action player accrues zero regret") {
  WeightedGame game;
  game.delta = 1.0;
  game.weights = {1.0, 2.0};
  game.resources = {PolyLatency({0.0, 1.0}), PolyLatency({1.0, 0.5})};
  game.strategies = {{{0}}, {{0}, {1}}};  // player 0 has one action
  DynamicsConfig config;
  config.rounds = 400;
  config.seed = 3;
  const EquilibriumProfile profile =
      hedge_dynamics(game, base_latencies(game), config);
  for (const Allocation& a : profile.history) CHECK(a.choice[0] == 0);
  CHECK(profile.regret[0] == doctest::Approx(0.0).scale(1.0).epsilon(1e-12));
}

TEST_CASE("best-pure extraction keeps the earliest minimizer") {
  const WeightedGame game = split_instance();
  EquilibriumProfile profile;
  profile.rounds = 3;
  profile.history = {Allocation{{0, 0}},   // SC 4
                     Allocation{{1, 0}},   // SC 2
                     Allocation{{0, 1}}};  // SC 2, tie: later round loses
  const BestPure best = extract_best_pure(game, profile);
  CHECK(best.social_cost == doctest::Approx(2.0));
  CHECK(best.allocation.choice == std::vector<int>{1, 0});
}

TEST_CASE("brute force matches a recursive oracle and reports counts") {
  SplitMix64 rng(6060);
  for (int trial = 0; trial < 10; ++trial) {
    const WeightedGame game = testutil::random_instance(rng);
    const OptResult opt = brute_force_opt(game);
    CHECK(opt.social_cost ==
          doctest::Approx(recursive_opt(game)).epsilon(1e-12));
    CHECK(social_cost(game, opt.allocation) ==
          doctest::Approx(opt.social_cost).epsilon(1e-12));
    std::size_t expected = 1;
    for (const auto& actions : game.strategies) expected *= actions.size();
    CHECK(opt.profiles == expected);
  }

  // Lexicographic scan keeps the first minimizer: (0,1) precedes (1,0).
  const OptResult tie = brute_force_opt(split_instance());
  CHECK(tie.allocation.choice == std::vector<int>{0, 1});
}

TEST_CASE("brute force refuses oversized profile spaces") {
  WeightedGame game;
  game.delta = 1.0;
  game.weights.assign(24, 1.0);
  game.resources = {PolyLatency({0.0, 1.0}), PolyLatency({0.0, 1.0})};
  game.strategies.assign(24, {{0}, {1}});
  CHECK_THROWS_AS(brute_force_opt(game), ResourceLimitError);
}

TEST_CASE("certification boundaries") {
  const WeightedGame game = split_instance();
  CHECK(certify_ratio(game, 2.0, 1.0, 0.01).pass);       // ratio 2 <= 2.01
  CHECK_FALSE(certify_ratio(game, 2.03, 1.0, 0.0).pass);  // 2.03 > 2
  CHECK_THROWS_AS(certify_ratio(game, 1.0, 0.0, 0.05), ValidationError);
  CHECK_THROWS_AS(certify_ratio(game, 1.0, 1.0, -0.1), ValidationError);
}

TEST_CASE("realized regret sits within the hedge guarantee") {
  SplitMix64 rng(88);
  for (int trial = 0; trial < 6; ++trial) {
    const WeightedGame game = testutil::random_instance(rng);
    DynamicsConfig config;
    config.rounds = 20000;
    config.seed = 50 + static_cast<std::uint64_t>(trial);
    const auto perceived = base_latencies(game);
    const EquilibriumProfile profile =
        hedge_dynamics(game, perceived, config);

    double scale = 0.0;
    for (const PolyLatency& ell : perceived) {
      scale += ell(game.total_weight());
    }
    for (std::size_t i = 0; i < game.num_players(); ++i) {
      const double k = static_cast<double>(game.strategies[i].size());
      if (k < 2.0) continue;
      const double bound =
          scale * std::sqrt(std::log(k) /
                            (2.0 * static_cast<double>(config.rounds)));
      // 3x headroom over the expected-regret bound absorbs sampling noise.
      CHECK(profile.regret[i] <= 3.0 * bound + 1e-9);
    }
  }
}

TEST_CASE("taxed play certifies the two-player instance end to end") {
  const WeightedGame game = split_instance();
  const RelaxationSolution sol = solve_relaxation(game);
  const auto taxed = build_taxed_latencies(game, sol.v);
  std::vector<PolyLatency> perceived;
  for (const TaxedLatency& t : taxed) perceived.push_back(t.latency());

  DynamicsConfig config;
  config.rounds = 5000;
  config.seed = 0;
  const EquilibriumProfile profile = hedge_dynamics(game, perceived, config);
  const BestPure best = extract_best_pure(game, profile);
  const OptResult opt = brute_force_opt(game);
  const CertifyReport cert =
      certify_ratio(game, best.social_cost, opt.social_cost, 0.05);
  CHECK(cert.pass);
}
