#pragma once

#include <cstddef>
#include <vector>

namespace congestion {

struct SimplexOptions {
  double feas_tol = 1e-9;
  double opt_tol = 1e-9;
  std::size_t max_iterations = 0;  // 0 picks a generous automatic limit
};

enum class SimplexStatus { kOptimal, kInfeasible, kUnbounded, kIterationLimit };

struct SimplexResult {
  SimplexStatus status = SimplexStatus::kIterationLimit;
  std::vector<double> x;      // one entry per structural column
  std::vector<double> duals;  // one entry per equality row
  double objective = 0.0;
  std::size_t iterations = 0;
};

// Minimizes c^T x subject to A x = b, x >= 0, via a dense two-phase full
// tableau with Bland's rule (no cycling).  `rows` holds A row by row.
// Artificial columns stay in the tableau so row duals can be read back.
SimplexResult solve_equality_form(const std::vector<std::vector<double>>& rows,
                                  const std::vector<double>& b,
                                  const std::vector<double>& c,
                                  const SimplexOptions& options = {});

}  // namespace congestion
