#include "congestion/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>

#include "congestion/errors.hpp"
#include "congestion/poisson.hpp"
#include "congestion/rng.hpp"

namespace congestion {
namespace {

void check_perceived(const WeightedGame& game,
                     const std::vector<PolyLatency>& perceived) {
  if (perceived.size() != game.num_resources()) {
    throw ValidationError("perceived latencies do not match resource count");
  }
}

// Perceived cost to player i of switching to `action` while everyone else
// keeps the loads behind `load` (built with i playing `played`).
double deviation_cost(const WeightedGame& game,
                      const std::vector<PolyLatency>& perceived,
                      const std::vector<double>& load, std::size_t i,
                      const std::vector<int>& played,
                      const std::vector<int>& action) {
  const double w = game.weights[i];
  double cost = 0.0;
  for (int r : action) {
    double x = load[r] + w;
    if (std::binary_search(played.begin(), played.end(), r)) x -= w;
    cost += perceived[r](x);
  }
  return cost;
}

}  // namespace

EquilibriumProfile hedge_dynamics(const WeightedGame& game,
                                  const std::vector<PolyLatency>& perceived,
                                  const DynamicsConfig& config) {
  game.validate();
  check_perceived(game, perceived);
  if (config.rounds == 0) throw ValidationError("need at least one round");

  const std::size_t N = game.num_players();
  const std::size_t T = config.rounds;

  // Losses are scaled by an upper bound on any perceived player cost: every
  // perceived latency is nondecreasing (nonnegative coefficients) and loads
  // never exceed the total weight.
  double scale = 0.0;
  const double W = game.total_weight();
  for (const PolyLatency& ell : perceived) scale += ell(W);
  if (!(scale > 0.0)) throw ValidationError("perceived costs are all zero");

  SplitMix64 root(config.seed);
  std::vector<SplitMix64> rng;
  rng.reserve(N);
  for (std::size_t i = 0; i < N; ++i) rng.push_back(root.split());

  std::vector<std::vector<double>> logw(N);
  std::vector<double> eta(N, 0.0);
  std::vector<std::vector<double>> cum_counter(N);
  std::vector<double> cum_realized(N, 0.0);
  for (std::size_t i = 0; i < N; ++i) {
    const std::size_t actions = game.strategies[i].size();
    logw[i].assign(actions, 0.0);
    cum_counter[i].assign(actions, 0.0);
    if (actions > 1) {
      eta[i] = std::sqrt(8.0 * std::log(static_cast<double>(actions)) /
                         static_cast<double>(T));
    }
  }

  EquilibriumProfile profile;
  profile.rounds = T;
  profile.seed = config.seed;
  profile.history.reserve(T);

  Allocation a;
  a.choice.assign(N, 0);
  std::vector<double> load(game.num_resources(), 0.0);
  for (std::size_t t = 0; t < T; ++t) {
    for (std::size_t i = 0; i < N; ++i) {
      const auto& lw = logw[i];
      double top = lw[0];
      for (double v : lw) top = std::max(top, v);
      double total = 0.0;
      for (double v : lw) total += std::exp(v - top);
      const double u = rng[i].uniform01() * total;
      double acc = 0.0;
      std::size_t pick = lw.size() - 1;
      for (std::size_t k = 0; k < lw.size(); ++k) {
        acc += std::exp(lw[k] - top);
        if (u < acc) {
          pick = k;
          break;
        }
      }
      a.choice[i] = static_cast<int>(pick);
    }
    profile.history.push_back(a);

    std::fill(load.begin(), load.end(), 0.0);
    for (std::size_t i = 0; i < N; ++i) {
      for (int r : game.strategies[i][a.choice[i]]) load[r] += game.weights[i];
    }

    for (std::size_t i = 0; i < N; ++i) {
      const auto& played = game.strategies[i][a.choice[i]];
      for (std::size_t k = 0; k < game.strategies[i].size(); ++k) {
        const double cost = deviation_cost(game, perceived, load, i, played,
                                           game.strategies[i][k]);
        cum_counter[i][k] += cost;
        if (k == static_cast<std::size_t>(a.choice[i])) {
          cum_realized[i] += cost;
        }
        logw[i][k] -= eta[i] * cost / scale;
      }
    }
  }

  profile.avg_realized.assign(N, 0.0);
  profile.regret.assign(N, 0.0);
  for (std::size_t i = 0; i < N; ++i) {
    profile.avg_realized[i] = cum_realized[i] / static_cast<double>(T);
    double best = cum_counter[i][0];
    for (double v : cum_counter[i]) best = std::min(best, v);
    profile.regret[i] =
        profile.avg_realized[i] - best / static_cast<double>(T);
  }
  return profile;
}

RegretReport summarize_regret(const WeightedGame& game,
                              const std::vector<PolyLatency>& perceived,
                              const EquilibriumProfile& profile) {
  check_perceived(game, perceived);
  if (profile.history.empty()) throw ValidationError("empty play history");
  const std::size_t N = game.num_players();
  const double T = static_cast<double>(profile.history.size());

  std::vector<double> realized(N, 0.0);
  std::vector<std::vector<double>> counter(N);
  for (std::size_t i = 0; i < N; ++i) {
    counter[i].assign(game.strategies[i].size(), 0.0);
  }
  std::vector<double> load(game.num_resources(), 0.0);
  for (const Allocation& a : profile.history) {
    std::fill(load.begin(), load.end(), 0.0);
    for (std::size_t i = 0; i < N; ++i) {
      for (int r : game.strategies[i][a.choice[i]]) load[r] += game.weights[i];
    }
    for (std::size_t i = 0; i < N; ++i) {
      const auto& played = game.strategies[i][a.choice[i]];
      for (std::size_t k = 0; k < game.strategies[i].size(); ++k) {
        const double cost = deviation_cost(game, perceived, load, i, played,
                                           game.strategies[i][k]);
        counter[i][k] += cost;
        if (k == static_cast<std::size_t>(a.choice[i])) realized[i] += cost;
      }
    }
  }

  RegretReport report;
  report.realized.assign(N, 0.0);
  report.best_fixed.assign(N, 0.0);
  report.regret.assign(N, 0.0);
  for (std::size_t i = 0; i < N; ++i) {
    report.realized[i] = realized[i] / T;
    double best = counter[i][0];
    for (double v : counter[i]) best = std::min(best, v);
    report.best_fixed[i] = best / T;
    report.regret[i] = report.realized[i] - report.best_fixed[i];
    report.max_regret = std::max(report.max_regret, report.regret[i]);
    report.weighted_regret +=
        game.weights[i] * std::max(0.0, report.regret[i]);
  }
  return report;
}

BestPure extract_best_pure(const WeightedGame& game,
                           const EquilibriumProfile& profile) {
  if (profile.history.empty()) throw ValidationError("empty play history");
  std::map<std::vector<int>, double> cache;
  BestPure best;
  bool have = false;
  for (const Allocation& a : profile.history) {
    auto [it, fresh] = cache.try_emplace(a.choice, 0.0);
    if (fresh) it->second = social_cost(game, a);
    if (!have || it->second < best.social_cost) {
      best.allocation = a;
      best.social_cost = it->second;
      have = true;
    }
  }
  return best;
}

OptResult brute_force_opt(const WeightedGame& game) {
  game.validate();
  const std::size_t N = game.num_players();
  double profiles = 1.0;
  for (std::size_t i = 0; i < N; ++i) {
    profiles *= static_cast<double>(game.strategies[i].size());
    if (profiles > 1e7) {
      throw ResourceLimitError(
          "exhaustive search over more than 1e7 allocations");
    }
  }

  OptResult result;
  Allocation a;
  a.choice.assign(N, 0);
  bool have = false;
  while (true) {
    const double sc = social_cost(game, a);
    ++result.profiles;
    if (!have || sc < result.social_cost) {
      result.allocation = a;
      result.social_cost = sc;
      have = true;
    }
    std::size_t i = 0;
    for (; i < N; ++i) {
      const std::size_t pos = N - 1 - i;  // advance the last player first
      if (static_cast<std::size_t>(++a.choice[pos]) <
          game.strategies[pos].size()) {
        break;
      }
      a.choice[pos] = 0;
    }
    if (i == N) break;
  }
  return result;
}

CertifyReport certify_ratio(const WeightedGame& game, double best_pure_sc,
                            double opt_sc, double epsilon) {
  if (!(opt_sc > 0.0)) throw ValidationError("optimum must be positive");
  if (!(epsilon >= 0.0)) throw ValidationError("epsilon must be >= 0");
  CertifyReport report;
  report.opt = opt_sc;
  report.best_pure = best_pure_sc;
  report.ratio = best_pure_sc / opt_sc;
  report.rho = rho_factor(game);
  report.epsilon = epsilon;
  report.pass = report.ratio <= report.rho + epsilon;
  return report;
}

}  // namespace congestion
