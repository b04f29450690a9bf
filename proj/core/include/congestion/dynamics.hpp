#pragma once

#include <cstdint>
#include <vector>

#include "congestion/game.hpp"
#include "congestion/latency.hpp"

namespace congestion {

struct DynamicsConfig {
  std::size_t rounds = 100000;
  std::uint64_t seed = 0;
};

// Trace of multiplicative-weights (Hedge) play.  Costs and regrets are in
// perceived (taxed) units; each player's learning rate is
// sqrt(8 ln|A_i| / T) with losses scaled into [0, 1].
struct EquilibriumProfile {
  std::vector<Allocation> history;
  std::vector<double> avg_realized;  // per player
  std::vector<double> regret;       // external regret per player
  std::size_t rounds = 0;
  std::uint64_t seed = 0;
};

// Runs Hedge for every player against the perceived latencies (one per
// resource).  Pass game.resources for untaxed play.
EquilibriumProfile hedge_dynamics(const WeightedGame& game,
                                  const std::vector<PolyLatency>& perceived,
                                  const DynamicsConfig& config);

struct RegretReport {
  std::vector<double> realized;    // average perceived cost per player
  std::vector<double> best_fixed;  // best fixed action in hindsight
  std::vector<double> regret;      // realized - best_fixed
  double max_regret = 0.0;
  double weighted_regret = 0.0;  // sum_i w_i max(0, regret_i)
};

// Recomputes regrets from the stored history (independent of the sums
// accumulated during play).
RegretReport summarize_regret(const WeightedGame& game,
                              const std::vector<PolyLatency>& perceived,
                              const EquilibriumProfile& profile);

struct BestPure {
  Allocation allocation;
  double social_cost = 0.0;
};

// Cheapest allocation (original, untaxed social cost) among those played;
// ties keep the earliest round.
BestPure extract_best_pure(const WeightedGame& game,
                           const EquilibriumProfile& profile);

struct OptResult {
  Allocation allocation;
  double social_cost = 0.0;
  std::size_t profiles = 0;
};

// Exhaustive minimum social cost over all pure allocations (lexicographic
// scan, first minimizer kept).  Refuses more than 10^7 profiles.
OptResult brute_force_opt(const WeightedGame& game);

struct CertifyReport {
  double opt = 0.0;
  double best_pure = 0.0;
  double ratio = 0.0;
  double rho = 0.0;
  double epsilon = 0.0;
  bool pass = false;  // ratio <= rho + epsilon
};

CertifyReport certify_ratio(const WeightedGame& game, double best_pure_sc,
                            double opt_sc, double epsilon);

}  // namespace congestion
