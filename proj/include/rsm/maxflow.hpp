#pragma once

#include <cmath>
#include <cstdint>
#include <deque>
#include <limits>
#include <stdexcept>
#include <vector>

#include "rsm/graph.hpp"

namespace rsm {

/// BFS augmenting-path max flow on integer capacities. Undirected edges are
/// a mutually-reverse arc pair with the full capacity on both sides.
class MaxFlow {
 public:
  explicit MaxFlow(int n) : head_(n, -1) {}

  /// `tag` is the caller's edge id, kept so cuts map back to ground-set
  /// elements.
  void add_undirected_edge(int u, int v, std::int64_t cap, int tag) {
    add_arc(u, v, cap, tag);
    add_arc(v, u, cap, tag);
  }

  std::int64_t run(int s, int t) {
    std::int64_t total = 0;
    for (;;) {
      std::vector<int> parent_arc(head_.size(), -1);
      std::vector<char> seen(head_.size(), 0);
      std::deque<int> queue{s};
      seen[s] = 1;
      while (!queue.empty() && !seen[t]) {
        int v = queue.front();
        queue.pop_front();
        for (int a = head_[v]; a != -1; a = arcs_[a].next) {
          if (arcs_[a].cap <= 0) continue;
          int w = arcs_[a].to;
          if (seen[w]) continue;
          seen[w] = 1;
          parent_arc[w] = a;
          queue.push_back(w);
        }
      }
      if (!seen[t]) break;
      std::int64_t push = std::numeric_limits<std::int64_t>::max();
      for (int v = t; v != s;) {
        int a = parent_arc[v];
        push = std::min(push, arcs_[a].cap);
        v = arcs_[a ^ 1].to;
      }
      for (int v = t; v != s;) {
        int a = parent_arc[v];
        arcs_[a].cap -= push;
        arcs_[a ^ 1].cap += push;
        v = arcs_[a ^ 1].to;
      }
      total += push;
    }
    last_source_ = s;
    return total;
  }

  /// Vertices reachable from the last run's source in the residual graph.
  std::vector<char> min_cut_side() const {
    std::vector<char> side(head_.size(), 0);
    std::deque<int> queue{last_source_};
    side[last_source_] = 1;
    while (!queue.empty()) {
      int v = queue.front();
      queue.pop_front();
      for (int a = head_[v]; a != -1; a = arcs_[a].next) {
        if (arcs_[a].cap <= 0 || side[arcs_[a].to]) continue;
        side[arcs_[a].to] = 1;
        queue.push_back(arcs_[a].to);
      }
    }
    return side;
  }

 private:
  struct Arc {
    int to;
    std::int64_t cap;
    int tag;
    int next;
  };

  void add_arc(int u, int v, std::int64_t cap, int tag) {
    arcs_.push_back({v, cap, tag, head_[u]});
    head_[u] = static_cast<int>(arcs_.size()) - 1;
  }

  std::vector<int> head_;
  std::vector<Arc> arcs_;
  int last_source_ = 0;
};

struct MinCutResult {
  ElementSet cut_edges;
  double value = 0.0;
  bool feasible = false;
};

/// Minimum s-t cut restricted to the allowed edges; edges outside `allowed`
/// get an uncuttable capacity. Real costs are scaled to integers (default
/// 1e6) so augmenting arithmetic stays exact.
inline MinCutResult min_st_cut(const Graph& g, const std::vector<double>& costs,
                               const ElementSet& allowed, double scale = 1e6) {
  MinCutResult result;
  result.cut_edges = ElementSet(g.num_edges());
  std::vector<std::int64_t> caps(g.num_edges());
  std::int64_t allowed_total = 0;
  for (int e = 0; e < g.num_edges(); ++e) {
    if (allowed.test(e)) {
      caps[e] = std::llround(costs[e] * scale);
      allowed_total += caps[e];
    }
  }
  const std::int64_t uncuttable = allowed_total + 1;
  MaxFlow flow(g.num_vertices());
  for (int e = 0; e < g.num_edges(); ++e)
    flow.add_undirected_edge(g.edge(e).u, g.edge(e).v, allowed.test(e) ? caps[e] : uncuttable, e);
  std::int64_t value = flow.run(g.source(), g.sink());
  if (value >= uncuttable) return result;  // any cut needs a forbidden edge
  result.feasible = true;
  result.value = static_cast<double>(value) / scale;
  std::vector<char> side = flow.min_cut_side();
  for (int e = 0; e < g.num_edges(); ++e)
    if (side[g.edge(e).u] != side[g.edge(e).v]) result.cut_edges.set(e);
  return result;
}

}  // namespace rsm
