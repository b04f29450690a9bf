#include "congestion/game.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <string>

#include "congestion/errors.hpp"

namespace congestion {
namespace {

void check_allocation(const WeightedGame& game, const Allocation& a) {
  if (a.choice.size() != game.num_players()) {
    throw ValidationError("allocation has " + std::to_string(a.choice.size()) +
                          " choices for " + std::to_string(game.num_players()) +
                          " players");
  }
  for (std::size_t i = 0; i < a.choice.size(); ++i) {
    const int k = a.choice[i];
    if (k < 0 || static_cast<std::size_t>(k) >= game.strategies[i].size()) {
      throw ValidationError("invalid allocation: player " + std::to_string(i) +
                            " has no action " + std::to_string(k));
    }
  }
}

}  // namespace

double WeightedGame::total_weight() const {
  double sum = 0.0;
  for (double w : weights) sum += w;
  return sum;
}

void WeightedGame::validate(int max_degree) const {
  if (weights.empty()) throw ValidationError("game has no players");
  if (resources.empty()) throw ValidationError("game has no resources");
  if (strategies.size() != weights.size()) {
    throw ValidationError("strategy lists do not match player count");
  }
  if (!(delta > 0.0) || !std::isfinite(delta)) {
    throw ValidationError("delta must be positive and finite");
  }
  for (std::size_t i = 0; i < weights.size(); ++i) {
    const double w = weights[i];
    if (!(w > 0.0) || !std::isfinite(w)) {
      throw ValidationError("player " + std::to_string(i) +
                            " weight must be positive");
    }
    const double ratio = w / delta;
    if (std::abs(ratio - std::round(ratio)) > 1e-9 * std::max(1.0, ratio)) {
      throw ValidationError("player " + std::to_string(i) + " weight " +
                            std::to_string(w) +
                            " is not an integer multiple of delta");
    }
  }
  for (const PolyLatency& ell : resources) {
    if (ell.degree() > max_degree) {
      throw ValidationError("latency degree " + std::to_string(ell.degree()) +
                            " exceeds the configured maximum " +
                            std::to_string(max_degree));
    }
  }
  for (std::size_t i = 0; i < strategies.size(); ++i) {
    const auto& actions = strategies[i];
    if (actions.empty()) {
      throw ValidationError("player " + std::to_string(i) + " has no actions");
    }
    std::set<std::vector<int>> seen;
    for (const auto& action : actions) {
      if (action.empty()) {
        throw ValidationError("player " + std::to_string(i) +
                              " has an empty action");
      }
      if (!std::is_sorted(action.begin(), action.end())) {
        throw ValidationError("actions must list resource indices in "
                              "ascending order");
      }
      if (std::adjacent_find(action.begin(), action.end()) != action.end()) {
        throw ValidationError("player " + std::to_string(i) +
                              " has an action with a repeated resource");
      }
      for (int r : action) {
        if (r < 0 || static_cast<std::size_t>(r) >= resources.size()) {
          throw ValidationError("player " + std::to_string(i) +
                                " references unknown resource " +
                                std::to_string(r));
        }
      }
      if (!seen.insert(action).second) {
        throw ValidationError("player " + std::to_string(i) +
                              " lists a duplicate action");
      }
    }
  }
}

LoadVector load_of(const WeightedGame& game, const Allocation& a) {
  check_allocation(game, a);
  LoadVector x;
  x.load.assign(game.num_resources(), 0.0);
  for (std::size_t i = 0; i < game.num_players(); ++i) {
    for (int r : game.strategies[i][a.choice[i]]) {
      x.load[r] += game.weights[i];
    }
  }
  return x;
}

double social_cost(const WeightedGame& game, const Allocation& a) {
  const LoadVector x = load_of(game, a);
  double sc = 0.0;
  for (std::size_t r = 0; r < game.num_resources(); ++r) {
    sc += game.resources[r].cost(x.load[r]);
  }
  return sc;
}

double player_cost(const WeightedGame& game, const Allocation& a,
                   std::size_t player, const LatencyOverride& override) {
  check_allocation(game, a);
  if (player >= game.num_players()) {
    throw ValidationError("player index out of range");
  }
  const LoadVector x = load_of(game, a);
  double cost = 0.0;
  for (int r : game.strategies[player][a.choice[player]]) {
    cost += override ? override(static_cast<std::size_t>(r), x.load[r])
                     : game.resources[r](x.load[r]);
  }
  return cost;
}

WeightedGame unweighted_to_weighted(const WeightedGame& unit_game, double w) {
  unit_game.validate();
  if (!(w > 0.0) || !std::isfinite(w)) {
    throw ValidationError("target weight must be positive");
  }
  for (double wi : unit_game.weights) {
    if (wi != 1.0) {
      throw ValidationError("input game must have all weights equal to 1");
    }
  }

  // ell(x) = ell'(x / w): load w*k evaluates to ell'(k), so the social cost
  // of every allocation scales by exactly w.
  WeightedGame out = unit_game;
  for (PolyLatency& ell : out.resources) {
    const auto base = ell.coeffs();
    std::vector<double> scaled(base.begin(), base.end());
    double pow_w = 1.0;
    for (std::size_t d = 1; d < scaled.size(); ++d) {
      pow_w *= w;
      scaled[d] /= pow_w;
      if (!std::isfinite(scaled[d])) {
        throw NumericRangeError("latency transform is not representable");
      }
    }
    ell = PolyLatency(scaled);
  }
  out.weights.assign(unit_game.num_players(), w);
  out.delta = unit_game.delta * w;
  return out;
}

RescaleResult rescale_weights(const WeightedGame& game, double delta) {
  if (!(delta > 0.0) || !std::isfinite(delta)) {
    throw ValidationError("delta must be positive and finite");
  }
  RescaleResult result;
  result.game = game;
  result.game.delta = delta;
  for (std::size_t i = 0; i < game.num_players(); ++i) {
    const double rounded = std::round(game.weights[i] / delta) * delta;
    if (rounded <= 0.0) {
      throw ValidationError("player " + std::to_string(i) + " weight " +
                            std::to_string(game.weights[i]) +
                            " rounds to zero at delta " +
                            std::to_string(delta));
    }
    result.game.weights[i] = rounded;
    result.max_relative_perturbation =
        std::max(result.max_relative_perturbation,
                 std::abs(rounded - game.weights[i]) / game.weights[i]);
  }
  return result;
}

std::vector<int> reachers(const WeightedGame& game, int r) {
  std::vector<int> out;
  for (std::size_t i = 0; i < game.num_players(); ++i) {
    for (const auto& action : game.strategies[i]) {
      if (std::binary_search(action.begin(), action.end(), r)) {
        out.push_back(static_cast<int>(i));
        break;
      }
    }
  }
  return out;
}

}  // namespace congestion
