#include "congestion/simplex.hpp"

#include <cmath>
#include <cstddef>
#include <string>

#include "congestion/errors.hpp"

namespace congestion {
namespace {

constexpr double kPivotTol = 1e-11;

struct Tableau {
  std::size_t m = 0;       // rows
  std::size_t n = 0;       // structural columns
  std::vector<std::vector<double>> t;  // m x (n + m + 1); last col is rhs
  std::vector<std::size_t> basis;      // basic column per row

  double& rhs(std::size_t i) { return t[i][n + m]; }

  void pivot(std::size_t row, std::size_t col) {
    const double p = t[row][col];
    for (double& v : t[row]) v /= p;
    t[row][col] = 1.0;  // kill round-off on the pivot itself
    for (std::size_t i = 0; i < m; ++i) {
      if (i == row) continue;
      const double f = t[i][col];
      if (f == 0.0) continue;
      for (std::size_t j = 0; j <= n + m; ++j) t[i][j] -= f * t[row][j];
      t[i][col] = 0.0;
    }
    basis[row] = col;
  }
};

// Runs Bland's rule until optimal for the given per-column costs.  Columns
// with index >= limit never enter.  Returns false on iteration exhaustion.
bool optimize(Tableau& tab, const std::vector<double>& cost,
              std::size_t limit, const SimplexOptions& options,
              std::size_t& iterations, std::size_t max_iterations,
              bool& unbounded) {
  unbounded = false;
  while (true) {
    // Reduced cost of column j: cost_j - sum_i cost_basis(i) * T[i][j].
    std::size_t enter = limit;
    for (std::size_t j = 0; j < limit; ++j) {
      double reduced = cost[j];
      for (std::size_t i = 0; i < tab.m; ++i) {
        reduced -= cost[tab.basis[i]] * tab.t[i][j];
      }
      if (reduced < -options.opt_tol) {
        enter = j;
        break;  // Bland: smallest eligible index
      }
    }
    if (enter == limit) return true;
    if (++iterations > max_iterations) return false;

    std::size_t leave = tab.m;
    double best = 0.0;
    for (std::size_t i = 0; i < tab.m; ++i) {
      if (tab.t[i][enter] <= kPivotTol) continue;
      const double ratio = tab.rhs(i) / tab.t[i][enter];
      if (leave == tab.m || ratio < best - kPivotTol ||
          (ratio < best + kPivotTol && tab.basis[i] < tab.basis[leave])) {
        leave = i;
        best = ratio;
      }
    }
    if (leave == tab.m) {
      unbounded = true;
      return true;
    }
    tab.pivot(leave, enter);
  }
}

}  // namespace

SimplexResult solve_equality_form(const std::vector<std::vector<double>>& rows,
                                  const std::vector<double>& b,
                                  const std::vector<double>& c,
                                  const SimplexOptions& options) {
  const std::size_t m = rows.size();
  if (b.size() != m) throw ValidationError("rhs length does not match rows");
  const std::size_t n = c.size();
  for (const auto& row : rows) {
    if (row.size() != n) {
      throw ValidationError("constraint row width does not match objective");
    }
  }
  for (double v : b) {
    if (!std::isfinite(v)) throw ValidationError("rhs must be finite");
  }

  Tableau tab;
  tab.m = m;
  tab.n = n;
  tab.t.assign(m, std::vector<double>(n + m + 1, 0.0));
  tab.basis.resize(m);
  std::vector<double> row_sign(m, 1.0);
  for (std::size_t i = 0; i < m; ++i) {
    const double s = b[i] < 0.0 ? -1.0 : 1.0;
    row_sign[i] = s;
    for (std::size_t j = 0; j < n; ++j) tab.t[i][j] = s * rows[i][j];
    tab.t[i][n + i] = 1.0;
    tab.rhs(i) = s * b[i];
    tab.basis[i] = n + i;
  }

  const std::size_t max_iterations =
      options.max_iterations ? options.max_iterations
                             : 10000 + 50 * (m + n) * (m + n);

  SimplexResult result;

  // Phase 1: drive the artificial variables to zero.
  std::vector<double> phase1_cost(n + m, 0.0);
  for (std::size_t k = 0; k < m; ++k) phase1_cost[n + k] = 1.0;
  bool unbounded = false;
  if (!optimize(tab, phase1_cost, n + m, options, result.iterations,
                max_iterations, unbounded)) {
    result.status = SimplexStatus::kIterationLimit;
    return result;
  }
  double infeasibility = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    if (tab.basis[i] >= n) infeasibility += tab.rhs(i);
  }
  if (infeasibility > options.feas_tol) {
    result.status = SimplexStatus::kInfeasible;
    return result;
  }

  // Pivot basic artificials out where possible; a row with no structural
  // entry is a dependent constraint and its artificial stays basic at zero
  // (it can never change again, so it is inert in phase 2).
  for (std::size_t i = 0; i < m; ++i) {
    if (tab.basis[i] < n) continue;
    for (std::size_t j = 0; j < n; ++j) {
      if (std::abs(tab.t[i][j]) > 1e-8) {
        tab.pivot(i, j);
        break;
      }
    }
  }

  // Phase 2: the real objective; artificials cost zero and never enter.
  std::vector<double> phase2_cost(n + m, 0.0);
  for (std::size_t j = 0; j < n; ++j) phase2_cost[j] = c[j];
  if (!optimize(tab, phase2_cost, n, options, result.iterations,
                max_iterations, unbounded)) {
    result.status = SimplexStatus::kIterationLimit;
    return result;
  }
  if (unbounded) {
    result.status = SimplexStatus::kUnbounded;
    return result;
  }

  result.status = SimplexStatus::kOptimal;
  result.x.assign(n, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    if (tab.basis[i] < n) result.x[tab.basis[i]] = tab.rhs(i);
  }
  result.objective = 0.0;
  for (std::size_t j = 0; j < n; ++j) result.objective += c[j] * result.x[j];
  // Row duals y = c_B^T B^{-1}, read from the artificial block which holds
  // B^{-1} column by column; undo the sign flips applied to the rhs.
  result.duals.assign(m, 0.0);
  for (std::size_t k = 0; k < m; ++k) {
    double y = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      y += phase2_cost[tab.basis[i]] * tab.t[i][n + k];
    }
    result.duals[k] = row_sign[k] * y;
  }
  return result;
}

}  // namespace congestion
