#pragma once

#include <limits>
#include <stdexcept>
#include <vector>

namespace rsm {

struct AssignmentResult {
  std::vector<int> right_of_left;  // right column matched to each left row
  double cost = 0.0;
  bool feasible = false;
};

/// Minimum-cost perfect assignment on a square cost matrix (Hungarian
/// algorithm with potentials, O(m^3)). Missing edges are encoded as
/// `forbidden` costs; a result that has to use one is reported infeasible.
inline AssignmentResult solve_assignment(const std::vector<std::vector<double>>& cost,
                                         double forbidden = 1e100) {
  const int m = static_cast<int>(cost.size());
  AssignmentResult result;
  if (m == 0) {
    result.feasible = true;
    return result;
  }
  for (const auto& row : cost)
    if (static_cast<int>(row.size()) != m)
      throw std::invalid_argument("solve_assignment: matrix must be square");

  const double inf = std::numeric_limits<double>::infinity();
  // 1-based with a virtual 0 column, the classic potentials formulation
  std::vector<double> u(m + 1, 0.0), v(m + 1, 0.0);
  std::vector<int> match(m + 1, 0);  // match[j] = row assigned to column j
  std::vector<int> way(m + 1, 0);

  for (int i = 1; i <= m; ++i) {
    match[0] = i;
    int j0 = 0;
    std::vector<double> minv(m + 1, inf);
    std::vector<char> used(m + 1, 0);
    do {
      used[j0] = 1;
      int i0 = match[j0], j1 = -1;
      double delta = inf;
      for (int j = 1; j <= m; ++j) {
        if (used[j]) continue;
        double cur = cost[i0 - 1][j - 1] - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= m; ++j) {
        if (used[j]) {
          u[match[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (match[j0] != 0);
    do {
      int j1 = way[j0];
      match[j0] = match[j1];
      j0 = j1;
    } while (j0 != 0);
  }

  result.right_of_left.assign(m, -1);
  result.feasible = true;
  for (int j = 1; j <= m; ++j) {
    int i = match[j];
    result.right_of_left[i - 1] = j - 1;
    double c = cost[i - 1][j - 1];
    if (c >= forbidden * 0.5) result.feasible = false;
    result.cost += c;
  }
  return result;
}

}  // namespace rsm
