#include "congestion/relaxation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <string>

#include "congestion/errors.hpp"
#include "congestion/poisson.hpp"
#include "congestion/simplex.hpp"

namespace congestion {
namespace {

constexpr std::uint64_t kBit = 1;

double subset_weight(const WeightedGame& game, std::uint64_t mask) {
  double w = 0.0;
  for (std::size_t i = 0; i < game.num_players(); ++i) {
    if (mask & (kBit << i)) w += game.weights[i];
  }
  return w;
}

// Row layout of the master program: one distribution row per resource, one
// coupling row per (resource, reaching player), one mixture row per player.
struct MasterLayout {
  std::vector<std::vector<int>> reach;          // reachers per resource
  std::vector<std::size_t> dist_row;            // per resource
  std::vector<std::vector<int>> coupling_row;   // [r][i], -1 if absent
  std::vector<std::size_t> mix_row;             // per player
  std::vector<std::pair<int, int>> y_cols;      // (player, action)
  std::size_t num_rows = 0;

  explicit MasterLayout(const WeightedGame& game) {
    const std::size_t R = game.num_resources();
    const std::size_t N = game.num_players();
    reach.resize(R);
    dist_row.resize(R);
    coupling_row.assign(R, std::vector<int>(N, -1));
    mix_row.resize(N);
    std::size_t row = 0;
    for (std::size_t r = 0; r < R; ++r) dist_row[r] = row++;
    for (std::size_t r = 0; r < R; ++r) {
      reach[r] = reachers(game, static_cast<int>(r));
      for (int i : reach[r]) coupling_row[r][i] = static_cast<int>(row++);
    }
    for (std::size_t i = 0; i < N; ++i) mix_row[i] = row++;
    num_rows = row;
    for (std::size_t i = 0; i < N; ++i) {
      for (std::size_t k = 0; k < game.strategies[i].size(); ++k) {
        y_cols.emplace_back(static_cast<int>(i), static_cast<int>(k));
      }
    }
  }
};

struct MasterSolve {
  SimplexResult lp;
  std::vector<ColumnId> z_ids;
};

MasterSolve solve_master(const WeightedGame& game, const MasterLayout& layout,
                         const std::set<std::uint64_t>* columns_per_resource) {
  MasterSolve out;
  for (std::size_t r = 0; r < game.num_resources(); ++r) {
    for (std::uint64_t mask : columns_per_resource[r]) {
      out.z_ids.push_back(ColumnId{static_cast<int>(r), mask});
    }
  }
  const std::size_t nz = out.z_ids.size();
  const std::size_t ny = layout.y_cols.size();
  const std::size_t n = nz + ny;

  std::vector<std::vector<double>> rows(layout.num_rows,
                                        std::vector<double>(n, 0.0));
  std::vector<double> b(layout.num_rows, 0.0);
  std::vector<double> cost(n, 0.0);

  for (std::size_t j = 0; j < nz; ++j) {
    const ColumnId& id = out.z_ids[j];
    rows[layout.dist_row[id.resource]][j] = 1.0;
    for (std::size_t i = 0; i < game.num_players(); ++i) {
      if (id.subset & (kBit << i)) {
        rows[layout.coupling_row[id.resource][i]][j] = 1.0;
      }
    }
    cost[j] = game.resources[id.resource].cost(subset_weight(game, id.subset));
  }
  for (std::size_t q = 0; q < ny; ++q) {
    const auto [i, k] = layout.y_cols[q];
    rows[layout.mix_row[i]][nz + q] = 1.0;
    for (int r : game.strategies[i][k]) {
      rows[layout.coupling_row[r][i]][nz + q] = -1.0;
    }
  }
  for (std::size_t r = 0; r < game.num_resources(); ++r) {
    b[layout.dist_row[r]] = 1.0;
  }
  for (std::size_t i = 0; i < game.num_players(); ++i) {
    b[layout.mix_row[i]] = 1.0;
  }

  out.lp = solve_equality_form(rows, b, cost);
  if (out.lp.status != SimplexStatus::kOptimal) {
    throw ResourceLimitError("master program did not reach optimality");
  }
  return out;
}

RelaxationSolution extract_solution(const WeightedGame& game,
                                    const MasterLayout& layout,
                                    const MasterSolve& master) {
  const std::size_t R = game.num_resources();
  const std::size_t N = game.num_players();
  RelaxationSolution sol;
  sol.objective = master.lp.objective;
  sol.v.assign(R, std::vector<double>(N, 0.0));
  sol.y.resize(N);
  for (std::size_t i = 0; i < N; ++i) {
    sol.y[i].assign(game.strategies[i].size(), 0.0);
  }
  const std::size_t nz = master.z_ids.size();
  for (std::size_t j = 0; j < nz; ++j) {
    const double value = master.lp.x[j];
    sol.z[master.z_ids[j]] = value;
    const ColumnId& id = master.z_ids[j];
    for (std::size_t i = 0; i < N; ++i) {
      if (id.subset & (kBit << i)) sol.v[id.resource][i] += value;
    }
  }
  for (std::size_t q = 0; q < layout.y_cols.size(); ++q) {
    const auto [i, k] = layout.y_cols[q];
    sol.y[i][k] = master.lp.x[nz + q];
  }
  sol.xi.assign(R, 0.0);
  sol.eta.assign(R, std::vector<double>(N, 0.0));
  for (std::size_t r = 0; r < R; ++r) {
    sol.xi[r] = master.lp.duals[layout.dist_row[r]];
    for (int i : layout.reach[r]) {
      sol.eta[r][i] = master.lp.duals[layout.coupling_row[r][i]];
    }
  }
  sol.stats.columns = nz;
  sol.stats.simplex_iterations = master.lp.iterations;
  return sol;
}

}  // namespace

std::vector<std::uint64_t> admissible_subsets(const WeightedGame& game,
                                              int r) {
  if (r < 0 || static_cast<std::size_t>(r) >= game.num_resources()) {
    throw ValidationError("resource index out of range");
  }
  const std::vector<int> reach = reachers(game, r);
  if (reach.size() > 16) {
    throw ResourceLimitError(
        "resource " + std::to_string(r) + " is reachable by " +
        std::to_string(reach.size()) +
        " players; full subset enumeration is capped at 16");
  }
  std::vector<std::uint64_t> subsets;
  subsets.reserve(std::size_t{1} << reach.size());
  for (std::uint64_t pick = 0; pick < (kBit << reach.size()); ++pick) {
    std::uint64_t mask = 0;
    for (std::size_t k = 0; k < reach.size(); ++k) {
      if (pick & (kBit << k)) mask |= kBit << reach[k];
    }
    subsets.push_back(mask);
  }
  std::sort(subsets.begin(), subsets.end());
  return subsets;
}

PricedColumn knapsack_pricing(const WeightedGame& game, int r, double xi_r,
                              const std::vector<double>& eta_r) {
  if (r < 0 || static_cast<std::size_t>(r) >= game.num_resources()) {
    throw ValidationError("resource index out of range");
  }
  if (eta_r.size() != game.num_players()) {
    throw ValidationError("dual vector does not match player count");
  }
  const std::vector<int> reach = reachers(game, r);
  const std::size_t K = reach.size();
  if (K > 63) {
    throw ResourceLimitError("subset masks support at most 63 players");
  }
  std::vector<long long> units(K);
  long long total_units = 0;
  for (std::size_t k = 0; k < K; ++k) {
    units[k] =
        static_cast<long long>(std::llround(game.weights[reach[k]] /
                                            game.delta));
    if (units[k] <= 0) throw ValidationError("weight below delta");
    total_units += units[k];
  }
  const std::size_t states =
      (K + 1) * static_cast<std::size_t>(total_units + 1);
  if (states > 4'000'000) {
    throw ResourceLimitError("pricing budget table exceeds 4e6 states");
  }

  const double kNegInf = -std::numeric_limits<double>::infinity();
  // g[k][b]: best achievable dual sum using the first k reaching players at
  // exactly b weight units.
  std::vector<std::vector<double>> g(
      K + 1, std::vector<double>(static_cast<std::size_t>(total_units) + 1,
                                 kNegInf));
  g[0][0] = 0.0;
  for (std::size_t k = 1; k <= K; ++k) {
    const long long u = units[k - 1];
    const double eta = eta_r[reach[k - 1]];
    for (long long bgt = 0; bgt <= total_units; ++bgt) {
      double best = g[k - 1][bgt];
      if (bgt >= u && g[k - 1][bgt - u] != kNegInf) {
        best = std::max(best, g[k - 1][bgt - u] + eta);
      }
      g[k][bgt] = best;
    }
  }

  PricedColumn best;
  best.id.resource = r;
  bool have = false;
  for (long long bgt = 0; bgt <= total_units; ++bgt) {
    if (g[K][bgt] == kNegInf) continue;
    // Reconstruct one optimal subset, dropping higher-indexed players on
    // ties so the resulting mask is the numerically smallest.
    std::uint64_t mask = 0;
    long long left = bgt;
    for (std::size_t k = K; k > 0; --k) {
      if (g[k][left] == g[k - 1][left]) continue;
      mask |= kBit << reach[k - 1];
      left -= units[k - 1];
    }
    double eta_sum = 0.0;
    for (int i : reach) {
      if (mask & (kBit << i)) eta_sum += eta_r[i];
    }
    const double value = xi_r + eta_sum -
                         game.resources[r].cost(subset_weight(game, mask));
    if (!have || value > best.violation ||
        (value == best.violation && mask < best.id.subset)) {
      best.violation = value;
      best.id.subset = mask;
      have = true;
    }
  }
  return best;
}

RelaxationSolution solve_relaxation(const WeightedGame& game,
                                    const SolveControls& controls) {
  game.validate();
  const MasterLayout layout(game);
  const std::size_t R = game.num_resources();
  std::vector<std::set<std::uint64_t>> columns(R);

  if (controls.mode == SolveMode::kEnumerate) {
    for (std::size_t r = 0; r < R; ++r) {
      const auto subsets = admissible_subsets(game, static_cast<int>(r));
      columns[r].insert(subsets.begin(), subsets.end());
    }
    MasterSolve master = solve_master(game, layout, columns.data());
    return extract_solution(game, layout, master);
  }

  // Column generation: seed with the empty set, the subsets induced by the
  // everyone-picks-first-action allocation, and all singletons.
  for (std::size_t r = 0; r < R; ++r) {
    columns[r].insert(0);
    std::uint64_t first_action_mask = 0;
    for (std::size_t i = 0; i < game.num_players(); ++i) {
      const auto& action = game.strategies[i][0];
      if (std::binary_search(action.begin(), action.end(),
                             static_cast<int>(r))) {
        first_action_mask |= kBit << i;
      }
    }
    columns[r].insert(first_action_mask);
    for (int i : layout.reach[r]) columns[r].insert(kBit << i);
  }

  double best_lb = -std::numeric_limits<double>::infinity();
  std::size_t simplex_iterations = 0;
  std::vector<std::pair<double, double>> trace;
  for (std::size_t round = 0; round < controls.max_rounds; ++round) {
    MasterSolve master = solve_master(game, layout, columns.data());
    simplex_iterations += master.lp.iterations;
    const double ub = master.lp.objective;

    RelaxationSolution sol = extract_solution(game, layout, master);
    std::vector<PricedColumn> priced(R);
    double total_violation = 0.0;
    for (std::size_t r = 0; r < R; ++r) {
      priced[r] = knapsack_pricing(game, static_cast<int>(r), sol.xi[r],
                                   sol.eta[r]);
      total_violation += std::max(0.0, priced[r].violation);
    }
    // Lowering every distribution dual by its pricing violation yields a
    // feasible dual point, so this is a valid lower bound.
    const double lb = ub - total_violation;
    best_lb = std::max(best_lb, lb);
    trace.emplace_back(ub, lb);

    const double scale = std::max(1.0, std::abs(ub));
    const bool priced_out = total_violation <= 1e-9 * scale;
    const bool gap_met = (ub - best_lb) <= controls.epsilon * scale;
    if (priced_out || gap_met) {
      sol.stats.pricing_rounds = round + 1;
      sol.stats.simplex_iterations = simplex_iterations;
      sol.stats.bound_trace = std::move(trace);
      return sol;
    }

    bool added = false;
    for (std::size_t r = 0; r < R; ++r) {
      if (priced[r].violation > 1e-10 * scale) {
        added |= columns[r].insert(priced[r].id.subset).second;
      }
    }
    if (!added) {
      // Every violated column is already present: the duals have hit noise
      // level, so report the bounds we can certify.
      throw ResourceLimitError(
          "column generation stalled before reaching the requested gap", ub,
          best_lb);
    }
  }
  throw ResourceLimitError("column generation hit the round cap",
                           trace.empty() ? 0.0 : trace.back().first, best_lb);
}

bool FeasibilityReport::pass(double tol) const {
  return max_distribution_violation <= tol && max_coupling_violation <= tol &&
         max_mixture_violation <= tol && max_simplex_violation <= tol &&
         min_mass >= -tol;
}

FeasibilityReport check_feasibility(const WeightedGame& game,
                                    const RelaxationSolution& sol) {
  const std::size_t R = game.num_resources();
  const std::size_t N = game.num_players();
  FeasibilityReport report;

  std::vector<double> dist(R, 0.0);
  std::vector<std::vector<double>> marginal(R, std::vector<double>(N, 0.0));
  for (const auto& [id, value] : sol.z) {
    report.min_mass = std::min(report.min_mass, value);
    dist[id.resource] += value;
    for (std::size_t i = 0; i < N; ++i) {
      if (id.subset & (kBit << i)) marginal[id.resource][i] += value;
    }
  }
  for (std::size_t r = 0; r < R; ++r) {
    report.max_distribution_violation = std::max(
        report.max_distribution_violation, std::abs(dist[r] - 1.0));
    for (std::size_t i = 0; i < N; ++i) {
      report.max_coupling_violation =
          std::max(report.max_coupling_violation,
                   std::abs(marginal[r][i] - sol.v[r][i]));
    }
  }
  for (std::size_t i = 0; i < N; ++i) {
    double total = 0.0;
    for (std::size_t k = 0; k < game.strategies[i].size(); ++k) {
      const double value = sol.y[i][k];
      report.min_mass = std::min(report.min_mass, value);
      total += value;
    }
    report.max_simplex_violation =
        std::max(report.max_simplex_violation, std::abs(total - 1.0));
  }
  for (std::size_t r = 0; r < R; ++r) {
    for (std::size_t i = 0; i < N; ++i) {
      double from_y = 0.0;
      for (std::size_t k = 0; k < game.strategies[i].size(); ++k) {
        const auto& action = game.strategies[i][k];
        if (std::binary_search(action.begin(), action.end(),
                               static_cast<int>(r))) {
          from_y += sol.y[i][k];
        }
      }
      report.max_mixture_violation = std::max(
          report.max_mixture_violation, std::abs(from_y - sol.v[r][i]));
    }
  }
  return report;
}

double mixture_cost_of_solution(const WeightedGame& game,
                                const RelaxationSolution& sol) {
  double total = 0.0;
  for (std::size_t r = 0; r < game.num_resources(); ++r) {
    total += expected_cost(game.resources[r], sol.v[r], game.weights);
  }
  return total;
}

MixtureBoundReport mixture_bound_report(const WeightedGame& game,
                                        const RelaxationSolution& sol) {
  MixtureBoundReport report;
  report.mixture_cost = mixture_cost_of_solution(game, sol);
  report.rho = rho_factor(game);
  report.lp_objective = sol.objective;
  report.slack = report.rho * report.lp_objective - report.mixture_cost;
  return report;
}

}  // namespace congestion
