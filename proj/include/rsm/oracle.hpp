#pragma once

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <functional>
#include <numeric>
#include <stdexcept>
#include <utility>
#include <vector>

#include "rsm/constraint.hpp"
#include "rsm/element_set.hpp"
#include "rsm/robust_instance.hpp"

namespace rsm {

struct EnumerationBudget {
  int max_ground_size = 16;
  long long max_feasible_sets = 10'000'000;
  double timeout_seconds = 600.0;
};

class BudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

class BudgetGuard {
 public:
  explicit BudgetGuard(const EnumerationBudget& b)
      : budget_(b), start_(std::chrono::steady_clock::now()) {}

  void count_feasible() {
    if (++feasible_ > budget_.max_feasible_sets)
      throw BudgetExceeded("enumerate_feasible: feasible-set budget exceeded");
    if ((feasible_ & 0x3ff) == 0) check_time();
  }

  void check_time() const {
    auto elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start_);
    if (elapsed.count() > budget_.timeout_seconds)
      throw BudgetExceeded("enumerate_feasible: timeout");
  }

 private:
  const EnumerationBudget& budget_;
  std::chrono::steady_clock::time_point start_;
  long long feasible_ = 0;
};

}  // namespace detail

/// Visits every feasible set exactly once. Matchings enumerate permutations
/// and trees enumerate (n-1)-subsets; everything else filters all subsets
/// through is_feasible. Budget overruns raise BudgetExceeded, never truncate
/// silently.
inline void enumerate_feasible(const Constraint& c, const EnumerationBudget& budget,
                               const std::function<void(const ElementSet&)>& visit) {
  const int n = c.ground_size();
  detail::BudgetGuard guard(budget);

  if (c.kind() == ConstraintKind::PerfectBipartiteMatching) {
    const Graph& g = c.graph();
    const int m = g.left_size();
    // adjacency by (left, right-offset); -1 where no edge exists
    std::vector<std::vector<int>> edge_id(m, std::vector<int>(m, -1));
    for (int e = 0; e < g.num_edges(); ++e) {
      const Edge& ed = g.edge(e);
      int u = std::min(ed.u, ed.v);
      int v = std::max(ed.u, ed.v) - m;
      edge_id[u][v] = e;
    }
    std::vector<int> perm(m);
    std::iota(perm.begin(), perm.end(), 0);
    do {
      ElementSet match(n);
      bool valid = true;
      for (int u = 0; u < m && valid; ++u) {
        int e = edge_id[u][perm[u]];
        if (e < 0)
          valid = false;
        else
          match.set(e);
      }
      if (valid) {
        guard.count_feasible();
        visit(match);
      }
    } while (std::next_permutation(perm.begin(), perm.end()));
    return;
  }

  if (c.kind() == ConstraintKind::SpanningTree) {
    const Graph& g = c.graph();
    const int want = g.num_vertices() - 1;
    if (n > 30) throw BudgetExceeded("enumerate_feasible: too many edges for tree enumeration");
    std::vector<int> pick;
    ElementSet current(n);
    auto recurse = [&](auto&& self, int next) -> void {
      if (static_cast<int>(pick.size()) == want) {
        if (edges_form_spanning_tree(g, current)) {
          guard.count_feasible();
          visit(current);
        }
        return;
      }
      if (n - next < want - static_cast<int>(pick.size())) return;
      for (int e = next; e < n; ++e) {
        pick.push_back(e);
        current.set(e);
        self(self, e + 1);
        current.reset(e);
        pick.pop_back();
      }
    };
    recurse(recurse, 0);
    return;
  }

  if (n > budget.max_ground_size)
    throw BudgetExceeded("enumerate_feasible: ground set exceeds budget");
  const std::uint64_t limit = std::uint64_t{1} << n;
  for (std::uint64_t mask = 0; mask < limit; ++mask) {
    if ((mask & 0xfff) == 0) guard.check_time();
    ElementSet s = set_from_mask(n, mask);
    if (c.is_feasible(s)) {
      guard.count_feasible();
      visit(s);
    }
  }
}

/// Global optimum of max_i f_i over C by enumeration; ties break to the
/// lexicographically smallest set so goldens are reproducible.
inline std::pair<ElementSet, double> brute_force_min(const RobustInstance& inst,
                                                     const EnumerationBudget& budget = {}) {
  ElementSet best;
  double best_value = 0.0;
  bool found = false;
  enumerate_feasible(inst.constraint, budget, [&](const ElementSet& s) {
    double v = inst.objective.eval(s);
    if (!found || v < best_value || (v == best_value && lex_less(s, best))) {
      best = s;
      best_value = v;
      found = true;
    }
  });
  if (!found) throw std::runtime_error("brute_force_min: no feasible set visited");
  return {best, best_value};
}

}  // namespace rsm
