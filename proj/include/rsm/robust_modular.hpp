#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "rsm/affine_family.hpp"
#include "rsm/constraint.hpp"
#include "rsm/graduated_assignment.hpp"

namespace rsm {

enum class MinMaxStrategy { Average, Max, Quadratic };

inline const char* strategy_name(MinMaxStrategy s) {
  switch (s) {
    case MinMaxStrategy::Average: return "avg";
    case MinMaxStrategy::Max: return "max";
    case MinMaxStrategy::Quadratic: return "quadratic";
  }
  return "?";
}

struct MinMaxSolution {
  ElementSet set;
  double value = 0.0;  // max_i (a_i + c_i(set))
  MinMaxStrategy strategy = MinMaxStrategy::Average;
  double beta = 1.0;   // guarantee factor of the inner linear solver
};

/// Default strategy set: avg and max everywhere, plus the quadratic
/// heuristic when the constraint is a matching.
inline std::vector<MinMaxStrategy> default_strategies(const Constraint& c) {
  std::vector<MinMaxStrategy> s{MinMaxStrategy::Average, MinMaxStrategy::Max};
  if (c.kind() == ConstraintKind::PerfectBipartiteMatching) s.push_back(MinMaxStrategy::Quadratic);
  return s;
}

/// Robust-Min: min over C of max_i (a_i + c_i(X)). Runs each requested
/// strategy, evaluates every candidate under the true max objective and
/// keeps the best (ties keep the earlier strategy). With an exact linear
/// solver the avg/max routes carry the factor-l guarantee; the quadratic
/// route is a heuristic.
inline MinMaxSolution solve_robust_min(const AffineFamily& fam, const Constraint& c,
                                       std::vector<MinMaxStrategy> strategies = {},
                                       const GraduatedAssignmentSchedule& sched = {}) {
  if (fam.ground_size() != c.ground_size())
    throw std::invalid_argument("solve_robust_min: family/constraint ground sets differ");
  if (strategies.empty()) strategies = default_strategies(c);

  MinMaxSolution best;
  bool have = false;
  for (MinMaxStrategy strategy : strategies) {
    ElementSet candidate;
    switch (strategy) {
      case MinMaxStrategy::Average:
        candidate = c.linear_minimize(avg_surrogate(fam).weights());
        break;
      case MinMaxStrategy::Max:
        candidate = c.linear_minimize(max_surrogate(fam).weights());
        break;
      case MinMaxStrategy::Quadratic: {
        if (c.kind() != ConstraintKind::PerfectBipartiteMatching)
          throw std::invalid_argument(
              "solve_robust_min: quadratic strategy needs a matching constraint");
        candidate = graduated_assignment(QuadraticMatchingObjective::from_family(fam), c.graph(),
                                         sched);
        break;
      }
    }
    double value = fam.eval(candidate);
    if (!have || value < best.value) {
      best.set = candidate;
      best.value = value;
      best.strategy = strategy;
      have = true;
    }
  }
  best.beta = c.linear_solver_beta();
  return best;
}

}  // namespace rsm
