#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "rsm/assignment.hpp"
#include "rsm/covering.hpp"
#include "rsm/element_set.hpp"
#include "rsm/graph.hpp"
#include "rsm/maxflow.hpp"

namespace rsm {

enum class ConstraintKind {
  CardinalityAtLeast,
  SpanningTree,
  PerfectBipartiteMatching,
  StPath,
  StCut,
  VertexCover,
  EdgeCover,
  SetCover,
};

namespace detail {

/// Weighted set cover instance: ground set = covering-set indices.
struct CoverData {
  int universe = 0;
  std::vector<ElementSet> sets;
};

inline bool cover_covers(const CoverData& data, const ElementSet& chosen) {
  ElementSet covered(data.universe);
  for (auto i = chosen.find_first(); i != ElementSet::npos; i = chosen.find_next(i))
    covered |= data.sets[i];
  return static_cast<int>(covered.count()) == data.universe;
}

/// Greedy weighted cover: best cost per newly covered element, ties toward
/// the smaller index. Carries the classic H(max |set|) guarantee.
inline std::optional<ElementSet> greedy_cover(const CoverData& data,
                                              const std::vector<double>& costs,
                                              const ElementSet& allowed) {
  const int s = static_cast<int>(data.sets.size());
  ElementSet chosen(s);
  ElementSet covered(data.universe);
  while (static_cast<int>(covered.count()) < data.universe) {
    int pick = -1;
    double best_ratio = std::numeric_limits<double>::infinity();
    for (int i = 0; i < s; ++i) {
      if (!allowed.test(i) || chosen.test(i)) continue;
      auto fresh = data.sets[i] - covered;
      std::size_t gain = fresh.count();
      if (gain == 0) continue;
      double ratio = costs[i] / static_cast<double>(gain);
      if (ratio < best_ratio) {
        best_ratio = ratio;
        pick = i;
      }
    }
    if (pick < 0) return std::nullopt;
    chosen.set(pick);
    covered |= data.sets[pick];
  }
  return chosen;
}

struct CoverSearchState {
  const CoverData& data;
  const std::vector<double>& costs;
  const ElementSet& allowed;
  ElementSet best;
  double best_cost = std::numeric_limits<double>::infinity();
  bool found = false;
};

inline void cover_branch(CoverSearchState& st, ElementSet& chosen, double cost,
                         const ElementSet& covered) {
  if (cost >= st.best_cost - 1e-12) return;
  if (static_cast<int>(covered.count()) == st.data.universe) {
    st.best = chosen;
    st.best_cost = cost;
    st.found = true;
    return;
  }
  // branch on the uncovered element with the fewest available sets
  int pick_u = -1;
  int fewest = std::numeric_limits<int>::max();
  for (int u = 0; u < st.data.universe; ++u) {
    if (covered.test(u)) continue;
    int options = 0;
    for (std::size_t i = 0; i < st.data.sets.size(); ++i)
      if (st.allowed.test(i) && !chosen.test(i) && st.data.sets[i].test(u)) ++options;
    if (options < fewest) {
      fewest = options;
      pick_u = u;
    }
  }
  if (fewest == 0) return;  // dead branch
  for (std::size_t i = 0; i < st.data.sets.size(); ++i) {
    if (!st.allowed.test(i) || chosen.test(i) || !st.data.sets[i].test(pick_u)) continue;
    chosen.set(i);
    cover_branch(st, chosen, cost + st.costs[i], covered | st.data.sets[i]);
    chosen.reset(i);
  }
}

/// Exact min-cost cover by branch and bound, seeded with the greedy
/// incumbent. Intended for small families only.
inline std::optional<ElementSet> exact_min_cover(const CoverData& data,
                                                 const std::vector<double>& costs,
                                                 const ElementSet& allowed) {
  CoverSearchState st{data, costs, allowed, ElementSet(data.sets.size())};
  if (auto seed = greedy_cover(data, costs, allowed)) {
    st.best = *seed;
    st.found = true;
    st.best_cost = 0.0;
    for (auto i = seed->find_first(); i != ElementSet::npos; i = seed->find_next(i))
      st.best_cost += costs[i];
    st.best_cost += 1e-9;  // let the search re-find an equal-cost optimum
  } else {
    return std::nullopt;
  }
  ElementSet chosen(data.sets.size());
  ElementSet covered(data.universe);
  cover_branch(st, chosen, 0.0, covered);
  return st.best;
}

inline double harmonic(int d) {
  double h = 0.0;
  for (int i = 1; i <= d; ++i) h += 1.0 / i;
  return h;
}

/// Most violated spanning-tree partition inequality x(delta(P)) >= p - 1,
/// by exhaustive enumeration of vertex partitions (restricted growth
/// strings). Exponential; desk-scale graphs only.
inline std::optional<CoveringMember> separate_tree_partition(const Graph& g,
                                                             const std::vector<double>& x,
                                                             double tol) {
  const int n = g.num_vertices();
  if (n > 12)
    throw std::runtime_error("spanning-tree separation: partition enumeration capped at 12 vertices");
  std::vector<int> label(n, 0);
  std::vector<int> best_label;
  double best_violation = tol;

  auto evaluate = [&](int blocks) {
    if (blocks <= 1) return;
    double crossing = 0.0;
    for (int e = 0; e < g.num_edges(); ++e)
      if (label[g.edge(e).u] != label[g.edge(e).v]) crossing += x[e];
    double violation = static_cast<double>(blocks - 1) - crossing;
    if (violation > best_violation) {
      best_violation = violation;
      best_label = label;
    }
  };

  auto recurse = [&](auto&& self, int vertex, int used_blocks) -> void {
    if (vertex == n) {
      evaluate(used_blocks);
      return;
    }
    for (int b = 0; b <= used_blocks; ++b) {
      label[vertex] = b;
      self(self, vertex + 1, std::max(used_blocks, b + 1));
    }
  };
  recurse(recurse, 1, 1);  // vertex 0 pinned to block 0

  if (best_label.empty()) return std::nullopt;
  CoveringMember member;
  member.support = ElementSet(g.num_edges());
  int blocks = *std::max_element(best_label.begin(), best_label.end()) + 1;
  for (int e = 0; e < g.num_edges(); ++e)
    if (best_label[g.edge(e).u] != best_label[g.edge(e).v]) member.support.set(e);
  member.requirement = blocks - 1;
  return member;
}

}  // namespace detail

/// A combinatorial family C over an indexed ground set (edges, vertices or
/// covering-set indices) with the four oracles every solver needs: linear
/// minimization, exact membership, monotone-closure membership, and the
/// covering polytope. Immutable after construction; a feasible set must
/// exist (checked by a unit-cost linear minimization up front).
class Constraint {
 public:
  static Constraint cardinality_at_least(int n, int k) {
    if (n <= 0 || k < 1 || k > n)
      throw std::invalid_argument("cardinality_at_least: need 1 <= k <= n");
    Constraint c(ConstraintKind::CardinalityAtLeast, n);
    c.k_ = k;
    c.validate();
    return c;
  }

  static Constraint spanning_tree(Graph g) {
    Constraint c(ConstraintKind::SpanningTree, g.num_edges());
    c.graph_ = std::move(g);
    c.validate();
    return c;
  }

  static Constraint perfect_bipartite_matching(Graph g) {
    if (!g.is_bipartite())
      throw std::invalid_argument("perfect_bipartite_matching: graph has no bipartition");
    if (2 * g.left_size() != g.num_vertices())
      throw std::invalid_argument("perfect_bipartite_matching: sides must have equal size");
    Constraint c(ConstraintKind::PerfectBipartiteMatching, g.num_edges());
    c.graph_ = std::move(g);
    c.validate();
    return c;
  }

  static Constraint st_path(Graph g) {
    if (!g.has_st()) throw std::invalid_argument("st_path: graph needs s and t");
    Constraint c(ConstraintKind::StPath, g.num_edges());
    c.graph_ = std::move(g);
    c.validate();
    return c;
  }

  static Constraint st_cut(Graph g) {
    if (!g.has_st()) throw std::invalid_argument("st_cut: graph needs s and t");
    Constraint c(ConstraintKind::StCut, g.num_edges());
    c.graph_ = std::move(g);
    c.validate();
    return c;
  }

  static Constraint vertex_cover(Graph g) {
    Constraint c(ConstraintKind::VertexCover, g.num_vertices());
    c.cover_.universe = g.num_edges();
    c.cover_.sets.assign(g.num_vertices(), ElementSet(g.num_edges()));
    for (int v = 0; v < g.num_vertices(); ++v)
      for (int e : g.incident(v)) c.cover_.sets[v].set(e);
    c.graph_ = std::move(g);
    c.validate();
    return c;
  }

  static Constraint edge_cover(Graph g) {
    Constraint c(ConstraintKind::EdgeCover, g.num_edges());
    c.cover_.universe = g.num_vertices();
    c.cover_.sets.assign(g.num_edges(), ElementSet(g.num_vertices()));
    for (int e = 0; e < g.num_edges(); ++e) {
      c.cover_.sets[e].set(g.edge(e).u);
      c.cover_.sets[e].set(g.edge(e).v);
    }
    c.graph_ = std::move(g);
    c.validate();
    return c;
  }

  static Constraint set_cover(int universe, std::vector<ElementSet> sets) {
    if (universe <= 0) throw std::invalid_argument("set_cover: universe must be nonempty");
    Constraint c(ConstraintKind::SetCover, static_cast<int>(sets.size()));
    for (const ElementSet& s : sets)
      if (static_cast<int>(s.size()) != universe)
        throw std::invalid_argument("set_cover: set size must match the universe");
    c.cover_.universe = universe;
    c.cover_.sets = std::move(sets);
    c.validate();
    return c;
  }

  ConstraintKind kind() const { return kind_; }
  int ground_size() const { return n_; }

  int cardinality_k() const {
    if (kind_ != ConstraintKind::CardinalityAtLeast)
      throw std::logic_error("cardinality_k: wrong constraint kind");
    return k_;
  }

  bool has_graph() const { return graph_.has_value(); }
  const Graph& graph() const {
    if (!graph_) throw std::logic_error("Constraint: no graph attached");
    return *graph_;
  }

  const detail::CoverData& cover_data() const { return cover_; }

  bool is_cover_kind() const {
    return kind_ == ConstraintKind::VertexCover || kind_ == ConstraintKind::EdgeCover ||
           kind_ == ConstraintKind::SetCover;
  }

  /// Guarantee factor of linear_minimize: 1 everywhere except the greedy
  /// cover fallback (harmonic-number factor), reported into solver traces.
  double linear_solver_beta() const {
    if (!is_cover_kind() || n_ <= kExactCoverLimit) return 1.0;
    int d = 0;
    for (const ElementSet& s : cover_.sets) d = std::max(d, static_cast<int>(s.count()));
    return detail::harmonic(std::max(1, d));
  }

  ElementSet linear_minimize(const std::vector<double>& costs) const {
    return linear_minimize_within(costs, full_set(n_));
  }

  /// Linear minimization restricted to subsets of `allowed`; the chain
  /// rounding shrink and the enumeration oracle rely on it.
  ElementSet linear_minimize_within(const std::vector<double>& costs,
                                    const ElementSet& allowed) const {
    if (static_cast<int>(costs.size()) != n_)
      throw std::invalid_argument("linear_minimize: cost length mismatch");
    for (double c : costs)
      if (!(c >= 0.0)) throw std::invalid_argument("linear_minimize: negative cost");
    if (static_cast<int>(allowed.size()) != n_)
      throw std::invalid_argument("linear_minimize: allowed-set size mismatch");

    switch (kind_) {
      case ConstraintKind::CardinalityAtLeast: {
        std::vector<int> ids;
        ids.reserve(allowed.count());
        for (auto i = allowed.find_first(); i != ElementSet::npos; i = allowed.find_next(i))
          ids.push_back(static_cast<int>(i));
        if (static_cast<int>(ids.size()) < k_)
          throw std::runtime_error("linear_minimize: infeasible (not enough elements)");
        std::stable_sort(ids.begin(), ids.end(),
                         [&](int a, int b) { return costs[a] < costs[b]; });
        ElementSet out(n_);
        for (int i = 0; i < k_; ++i) out.set(ids[i]);
        return out;
      }
      case ConstraintKind::SpanningTree: {
        auto tree = kruskal_mst(*graph_, costs, allowed);
        if (!tree) throw std::runtime_error("linear_minimize: infeasible (graph not connected)");
        return *tree;
      }
      case ConstraintKind::PerfectBipartiteMatching: {
        const Graph& g = *graph_;
        const int m = g.left_size();
        const double forbidden = 1e100;
        std::vector<std::vector<double>> cost(m, std::vector<double>(m, forbidden));
        std::vector<std::vector<int>> edge_id(m, std::vector<int>(m, -1));
        for (auto e = allowed.find_first(); e != ElementSet::npos; e = allowed.find_next(e)) {
          const Edge& ed = g.edge(e);
          int u = std::min(ed.u, ed.v);
          int v = std::max(ed.u, ed.v) - m;
          if (costs[e] < cost[u][v]) {
            cost[u][v] = costs[e];
            edge_id[u][v] = static_cast<int>(e);
          }
        }
        auto sol = solve_assignment(cost, forbidden);
        if (!sol.feasible)
          throw std::runtime_error("linear_minimize: infeasible (no perfect matching)");
        ElementSet out(n_);
        for (int u = 0; u < m; ++u) out.set(edge_id[u][sol.right_of_left[u]]);
        return out;
      }
      case ConstraintKind::StPath: {
        auto path = shortest_st_path(*graph_, costs, allowed);
        if (!path) throw std::runtime_error("linear_minimize: infeasible (t unreachable)");
        return *path;
      }
      case ConstraintKind::StCut: {
        auto cut = min_st_cut(*graph_, costs, allowed, 1e6);
        if (!cut.feasible)
          throw std::runtime_error("linear_minimize: infeasible (no cut within allowed edges)");
        return cut.cut_edges;
      }
      case ConstraintKind::VertexCover:
      case ConstraintKind::EdgeCover:
      case ConstraintKind::SetCover: {
        std::optional<ElementSet> sol;
        if (n_ <= kExactCoverLimit)
          sol = detail::exact_min_cover(cover_, costs, allowed);
        else
          sol = detail::greedy_cover(cover_, costs, allowed);
        if (!sol) throw std::runtime_error("linear_minimize: infeasible (cannot cover)");
        return *sol;
      }
    }
    throw std::logic_error("linear_minimize: unknown kind");
  }

  bool is_feasible(const ElementSet& s) const {
    check_set(s);
    switch (kind_) {
      case ConstraintKind::CardinalityAtLeast:
        return static_cast<int>(s.count()) >= k_;
      case ConstraintKind::SpanningTree:
        return edges_form_spanning_tree(*graph_, s);
      case ConstraintKind::PerfectBipartiteMatching:
        return is_perfect_matching(*graph_, s);
      case ConstraintKind::StPath:
        return is_simple_st_path(*graph_, s);
      case ConstraintKind::StCut:
        return removal_disconnects_st(*graph_, s);
      case ConstraintKind::VertexCover:
      case ConstraintKind::EdgeCover:
      case ConstraintKind::SetCover:
        return detail::cover_covers(cover_, s);
    }
    return false;
  }

  /// Membership in the monotone closure: does some subset of s lie in C?
  bool contains_feasible(const ElementSet& s) const {
    check_set(s);
    switch (kind_) {
      case ConstraintKind::CardinalityAtLeast:
        return static_cast<int>(s.count()) >= k_;
      case ConstraintKind::SpanningTree:
        return edges_connect_all(*graph_, s);
      case ConstraintKind::PerfectBipartiteMatching:
        return max_bipartite_matching_size(*graph_, s) == graph_->left_size();
      case ConstraintKind::StPath:
        return st_connected_within(*graph_, s);
      case ConstraintKind::StCut:
        return removal_disconnects_st(*graph_, s);
      case ConstraintKind::VertexCover:
      case ConstraintKind::EdgeCover:
      case ConstraintKind::SetCover:
        return detail::cover_covers(cover_, s);
    }
    return false;
  }

  /// Covering polytope of the monotone closure: explicit for cardinality,
  /// covers and matchings (per-vertex degree inequalities); separation
  /// oracles for paths (min-cut members), cuts (shortest-path members) and
  /// trees (partition inequalities).
  CoveringFamily covering_family() const {
    switch (kind_) {
      case ConstraintKind::CardinalityAtLeast: {
        std::vector<CoveringMember> members{{full_set(n_), k_}};
        return CoveringFamily(n_, std::move(members));
      }
      case ConstraintKind::PerfectBipartiteMatching: {
        std::vector<CoveringMember> members;
        for (int v = 0; v < graph_->num_vertices(); ++v) {
          CoveringMember m{ElementSet(n_), 1};
          for (int e : graph_->incident(v)) m.support.set(e);
          members.push_back(std::move(m));
        }
        return CoveringFamily(n_, std::move(members));
      }
      case ConstraintKind::VertexCover:
      case ConstraintKind::EdgeCover:
      case ConstraintKind::SetCover: {
        std::vector<CoveringMember> members;
        for (int u = 0; u < cover_.universe; ++u) {
          CoveringMember m{ElementSet(n_), 1};
          for (std::size_t i = 0; i < cover_.sets.size(); ++i)
            if (cover_.sets[i].test(u)) m.support.set(i);
          members.push_back(std::move(m));
        }
        return CoveringFamily(n_, std::move(members));
      }
      case ConstraintKind::StPath: {
        Graph g = *graph_;
        auto oracle = [g](const std::vector<double>& x,
                          double tol) -> std::optional<CoveringMember> {
          auto cut = min_st_cut(g, x, full_set(g.num_edges()), 1e9);
          if (!cut.feasible || cut.value >= 1.0 - tol) return std::nullopt;
          return CoveringMember{cut.cut_edges, 1};
        };
        return CoveringFamily(n_, oracle, static_cast<double>(n_));
      }
      case ConstraintKind::StCut: {
        Graph g = *graph_;
        auto oracle = [g](const std::vector<double>& x,
                          double tol) -> std::optional<CoveringMember> {
          auto path = shortest_st_path(g, x, full_set(g.num_edges()));
          if (!path) return std::nullopt;
          double mass = 0.0;
          for (auto e = path->find_first(); e != ElementSet::npos; e = path->find_next(e))
            mass += x[e];
          if (mass >= 1.0 - tol) return std::nullopt;
          return CoveringMember{*path, 1};
        };
        return CoveringFamily(n_, oracle, static_cast<double>(graph_->num_vertices() - 1));
      }
      case ConstraintKind::SpanningTree: {
        Graph g = *graph_;
        auto oracle = [g](const std::vector<double>& x,
                          double tol) -> std::optional<CoveringMember> {
          return detail::separate_tree_partition(g, x, tol);
        };
        double factor = static_cast<double>(n_ - (graph_->num_vertices() - 1) + 1);
        return CoveringFamily(n_, oracle, factor);
      }
    }
    throw std::logic_error("covering_family: unknown kind");
  }

  std::string describe() const {
    std::ostringstream oss;
    switch (kind_) {
      case ConstraintKind::CardinalityAtLeast:
        oss << "cardinality(k=" << k_ << ",n=" << n_ << ")";
        break;
      case ConstraintKind::SpanningTree:
        oss << "spanning_tree(n=" << graph_->num_vertices() << ",m=" << n_ << ")";
        break;
      case ConstraintKind::PerfectBipartiteMatching:
        oss << "matching(" << graph_->left_size() << "x" << graph_->left_size() << ")";
        break;
      case ConstraintKind::StPath:
        oss << "st_path(n=" << graph_->num_vertices() << ",m=" << n_ << ")";
        break;
      case ConstraintKind::StCut:
        oss << "st_cut(n=" << graph_->num_vertices() << ",m=" << n_ << ")";
        break;
      case ConstraintKind::VertexCover:
        oss << "vertex_cover(n=" << n_ << ",m=" << cover_.universe << ")";
        break;
      case ConstraintKind::EdgeCover:
        oss << "edge_cover(n=" << cover_.universe << ",m=" << n_ << ")";
        break;
      case ConstraintKind::SetCover:
        oss << "set_cover(U=" << cover_.universe << ",S=" << n_ << ")";
        break;
    }
    return oss.str();
  }

 private:
  static constexpr int kExactCoverLimit = 20;

  Constraint(ConstraintKind kind, int ground_size) : kind_(kind), n_(ground_size) {
    if (n_ <= 0) throw std::invalid_argument("Constraint: empty ground set");
  }

  void check_set(const ElementSet& s) const {
    if (static_cast<int>(s.size()) != n_)
      throw std::invalid_argument("Constraint: set size does not match ground set");
  }

  // fail fast: one unit-cost linear minimization proves a feasible set exists
  void validate() const {
    try {
      linear_minimize(std::vector<double>(n_, 1.0));
    } catch (const std::runtime_error& e) {
      throw std::invalid_argument(std::string("Constraint: no feasible set (") + e.what() + ")");
    }
  }

  ConstraintKind kind_;
  int n_;
  int k_ = 0;
  std::optional<Graph> graph_;
  detail::CoverData cover_;
};

}  // namespace rsm
