#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <utility>
#include <vector>

#include "congestion/game.hpp"

namespace congestion {

enum class SolveMode { kEnumerate, kColumnGeneration };

// One subset-mass variable: a set of players (global-index bitmask) jointly
// placed on a resource.
struct ColumnId {
  int resource = 0;
  std::uint64_t subset = 0;
  auto operator<=>(const ColumnId&) const = default;
};

struct SolverStats {
  std::size_t columns = 0;            // subset columns in the final master
  std::size_t pricing_rounds = 0;     // 0 under full enumeration
  std::size_t simplex_iterations = 0;
  // One (primal objective, Lagrangian lower bound) pair per pricing round.
  std::vector<std::pair<double, double>> bound_trace;
};

// Fractional relaxation of minimum social cost.  `v[r][i]` is the marginal
// probability that player i uses resource r; `y[i][k]` mixes player i's
// actions; `z` carries the per-resource subset distributions.
struct RelaxationSolution {
  double objective = 0.0;
  std::map<ColumnId, double> z;
  std::vector<std::vector<double>> v;
  std::vector<std::vector<double>> y;
  std::vector<double> xi;                // duals: one distribution row per r
  std::vector<std::vector<double>> eta;  // duals: coupling rows, eta[r][i]
  SolverStats stats;
};

struct SolveControls {
  SolveMode mode = SolveMode::kEnumerate;
  double epsilon = 0.0;          // column generation relative gap target
  std::size_t max_rounds = 400;  // pricing round cap
};

// Every subset of the players that can reach resource r, as sorted bitmasks
// (includes the empty set).  Limited to 16 reaching players.
std::vector<std::uint64_t> admissible_subsets(const WeightedGame& game, int r);

RelaxationSolution solve_relaxation(const WeightedGame& game,
                                    const SolveControls& controls = {});

struct PricedColumn {
  ColumnId id;
  double violation = 0.0;  // xi_r + sum_{i in S} eta_{r,i} - c_r(W_S)
};

// Most violated subset column for resource r under the given duals, found by
// an equality-budget knapsack over integer weight units.  Ties resolve to
// the numerically smallest subset mask.
PricedColumn knapsack_pricing(const WeightedGame& game, int r, double xi_r,
                              const std::vector<double>& eta_r);

struct FeasibilityReport {
  double max_distribution_violation = 0.0;  // per-resource masses sum to 1
  double max_coupling_violation = 0.0;      // subset marginals match v
  double max_mixture_violation = 0.0;       // v matches action mixtures
  double max_simplex_violation = 0.0;       // action mixtures sum to 1
  double min_mass = 0.0;                    // most negative variable
  bool pass(double tol = 1e-8) const;
};

FeasibilityReport check_feasibility(const WeightedGame& game,
                                    const RelaxationSolution& sol);

// sum_r E[c_r(sum_i w_i Poi(v_{r,i}))]: the expected cost of the solution's
// marginals under independent Poisson rounding.
double mixture_cost_of_solution(const WeightedGame& game,
                                const RelaxationSolution& sol);

// Certifies mixture_cost <= rho * lp_objective, the guarantee that Poisson
// rounding loses at most the worst-case factor.
struct MixtureBoundReport {
  double mixture_cost = 0.0;
  double rho = 0.0;
  double lp_objective = 0.0;
  double slack = 0.0;  // rho * lp_objective - mixture_cost
  bool pass(double tol = 1e-8) const { return slack >= -tol; }
};

MixtureBoundReport mixture_bound_report(const WeightedGame& game,
                                        const RelaxationSolution& sol);

}  // namespace congestion
