#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "congestion/latency.hpp"

namespace congestion {

/// Weighted congestion game: players with positive weights pick one action
/// each (an action is a set of resource indices), and every resource charges
/// its polynomial latency at the total weight currently on it.
///
/// All types here are immutable-by-convention after construction and every
/// operation below is a pure function, so they are safe to share across
/// threads without synchronization.
struct WeightedGame {
  std::vector<double> weights;              // per player, in load units
  std::vector<PolyLatency> resources;       // per resource
  /// strategies[i][k] is the k-th action of player i: a sorted,
  /// duplicate-free, non-empty list of resource indices.
  std::vector<std::vector<std::vector<int>>> strategies;
  /// Weight granularity: every weight must be an integer multiple of delta.
  double delta = 1.0;

  std::size_t num_players() const { return weights.size(); }
  std::size_t num_resources() const { return resources.size(); }
  double total_weight() const;

  /// Check every structural invariant; throws ValidationError on the first
  /// failure. max_degree caps the latency degree (tax coefficient recursions
  /// and moment tables grow combinatorially with it).
  void validate(int max_degree = PolyLatency::kDefaultMaxDegree) const;
};

/// One action index per player.
struct Allocation {
  std::vector<int> choice;

  bool operator==(const Allocation&) const = default;
};

/// Per-resource induced load x_r = sum of weights of players using r.
struct LoadVector {
  std::vector<double> load;
};

/// Optional per-resource latency replacement used to evaluate perceived
/// (taxed) costs: called as override(resource, load).
using LatencyOverride = std::function<double(std::size_t, double)>;

/// Induced loads of an allocation.
LoadVector load_of(const WeightedGame& game, const Allocation& a);

/// Social cost SC(a) = sum_r x_r(a) * ell_r(x_r(a)).
double social_cost(const WeightedGame& game, const Allocation& a);

/// Cost of player i: sum over chosen resources of the latency at the induced
/// load, with `override` (when given) replacing every resource's latency.
double player_cost(const WeightedGame& game, const Allocation& a,
                   std::size_t player, const LatencyOverride& override = {});

/// Given a game with all weights 1, build the game with all weights w whose
/// social cost is exactly w times the input's on every allocation.
/// Strategies are unchanged; each latency ell'(x) becomes ell(x) = ell'(x/w).
WeightedGame unweighted_to_weighted(const WeightedGame& unit_game, double w);

struct RescaleResult {
  WeightedGame game;
  double max_relative_perturbation = 0.0;
};

/// Round every weight to the nearest multiple of delta. Fails if a weight
/// rounds to zero.
RescaleResult rescale_weights(const WeightedGame& game, double delta);

/// Players that can place load on resource r (some action contains r),
/// ascending.
std::vector<int> reachers(const WeightedGame& game, int r);

}  // namespace congestion
