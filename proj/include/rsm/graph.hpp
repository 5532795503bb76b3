#pragma once

#include <algorithm>
#include <deque>
#include <limits>
#include <numeric>
#include <optional>
#include <queue>
#include <stdexcept>
#include <vector>

#include "rsm/element_set.hpp"

namespace rsm {

struct Edge {
  int u = -1;
  int v = -1;
};

/// Undirected graph over vertices 0..n-1 with an indexed edge list (the edge
/// index is the ground-set element for edge-based constraints). Optionally
/// carries an s-t pair and a bipartition (vertices 0..L-1 left, L..n-1
/// right).
class Graph {
 public:
  Graph(int num_vertices, std::vector<Edge> edges, std::optional<int> source = {},
        std::optional<int> sink = {}, std::optional<int> left_size = {})
      : n_(num_vertices),
        edges_(std::move(edges)),
        source_(source),
        sink_(sink),
        left_size_(left_size) {
    if (n_ <= 0) throw std::invalid_argument("Graph: needs at least one vertex");
    if (source_.has_value() != sink_.has_value())
      throw std::invalid_argument("Graph: source and sink must be set together");
    if (source_ && (*source_ < 0 || *source_ >= n_ || *sink_ < 0 || *sink_ >= n_))
      throw std::invalid_argument("Graph: s/t out of range");
    if (source_ && *source_ == *sink_) throw std::invalid_argument("Graph: s and t must differ");
    if (left_size_ && (*left_size_ <= 0 || *left_size_ >= n_))
      throw std::invalid_argument("Graph: bipartition size out of range");
    incident_.assign(n_, {});
    for (int e = 0; e < num_edges(); ++e) {
      const Edge& ed = edges_[e];
      if (ed.u < 0 || ed.u >= n_ || ed.v < 0 || ed.v >= n_)
        throw std::invalid_argument("Graph: edge endpoint out of range");
      if (ed.u == ed.v) throw std::invalid_argument("Graph: self-loops not supported");
      if (left_size_) {
        bool lu = ed.u < *left_size_, lv = ed.v < *left_size_;
        if (lu == lv)
          throw std::invalid_argument("Graph: bipartite edges must cross the partition");
      }
      incident_[ed.u].push_back(e);
      incident_[ed.v].push_back(e);
    }
    std::vector<std::pair<int, int>> pairs;
    pairs.reserve(edges_.size());
    for (const Edge& ed : edges_) pairs.emplace_back(std::min(ed.u, ed.v), std::max(ed.u, ed.v));
    std::sort(pairs.begin(), pairs.end());
    if (std::adjacent_find(pairs.begin(), pairs.end()) != pairs.end())
      throw std::invalid_argument("Graph: parallel edges not supported");
  }

  /// Complete bipartite graph K_{m,m}; edge (u, v) has index u*m + v for
  /// left u in 0..m-1 and right vertex m+v.
  static Graph complete_bipartite(int m) {
    std::vector<Edge> edges;
    edges.reserve(static_cast<std::size_t>(m) * m);
    for (int u = 0; u < m; ++u)
      for (int v = 0; v < m; ++v) edges.push_back({u, m + v});
    return Graph(2 * m, std::move(edges), {}, {}, m);
  }

  static Graph complete(int n, std::optional<int> s = {}, std::optional<int> t = {}) {
    std::vector<Edge> edges;
    for (int u = 0; u < n; ++u)
      for (int v = u + 1; v < n; ++v) edges.push_back({u, v});
    return Graph(n, std::move(edges), s, t);
  }

  int num_vertices() const { return n_; }
  int num_edges() const { return static_cast<int>(edges_.size()); }
  const Edge& edge(int e) const { return edges_.at(e); }
  const std::vector<Edge>& edges() const { return edges_; }
  const std::vector<int>& incident(int v) const { return incident_.at(v); }

  bool has_st() const { return source_.has_value(); }
  int source() const {
    if (!source_) throw std::logic_error("Graph: no source set");
    return *source_;
  }
  int sink() const {
    if (!sink_) throw std::logic_error("Graph: no sink set");
    return *sink_;
  }

  bool is_bipartite() const { return left_size_.has_value(); }
  int left_size() const {
    if (!left_size_) throw std::logic_error("Graph: no bipartition set");
    return *left_size_;
  }

  int other_end(int e, int v) const {
    const Edge& ed = edges_[e];
    return ed.u == v ? ed.v : ed.u;
  }

 private:
  int n_;
  std::vector<Edge> edges_;
  std::optional<int> source_, sink_;
  std::optional<int> left_size_;
  std::vector<std::vector<int>> incident_;
};

class DisjointSets {
 public:
  explicit DisjointSets(int n) : parent_(n), rank_(n, 0), components_(n) {
    std::iota(parent_.begin(), parent_.end(), 0);
  }

  int find(int x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }

  bool unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    if (rank_[a] < rank_[b]) std::swap(a, b);
    parent_[b] = a;
    if (rank_[a] == rank_[b]) ++rank_[a];
    --components_;
    return true;
  }

  int components() const { return components_; }

 private:
  std::vector<int> parent_;
  std::vector<int> rank_;
  int components_;
};

inline int component_count(const Graph& g, const ElementSet& edges) {
  DisjointSets dsu(g.num_vertices());
  for (auto e = edges.find_first(); e != ElementSet::npos; e = edges.find_next(e))
    dsu.unite(g.edge(e).u, g.edge(e).v);
  return dsu.components();
}

inline bool edges_connect_all(const Graph& g, const ElementSet& edges) {
  return component_count(g, edges) == 1;
}

inline bool edges_form_spanning_tree(const Graph& g, const ElementSet& edges) {
  return static_cast<int>(edges.count()) == g.num_vertices() - 1 && edges_connect_all(g, edges);
}

/// Minimum-cost spanning tree over the allowed edges (Kruskal; cost ties
/// break toward the smaller edge index). nullopt when the allowed edges do
/// not connect the graph.
inline std::optional<ElementSet> kruskal_mst(const Graph& g, const std::vector<double>& costs,
                                             const ElementSet& allowed) {
  std::vector<int> order;
  order.reserve(allowed.count());
  for (auto e = allowed.find_first(); e != ElementSet::npos; e = allowed.find_next(e))
    order.push_back(static_cast<int>(e));
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return costs[a] < costs[b]; });
  DisjointSets dsu(g.num_vertices());
  ElementSet tree(g.num_edges());
  for (int e : order)
    if (dsu.unite(g.edge(e).u, g.edge(e).v)) tree.set(e);
  if (dsu.components() != 1) return std::nullopt;
  return tree;
}

/// Cheapest s-t path over the allowed edges (Dijkstra; first-found parents,
/// so ties are deterministic in edge order). Returns the path's edge set.
inline std::optional<ElementSet> shortest_st_path(const Graph& g, const std::vector<double>& costs,
                                                  const ElementSet& allowed) {
  const int n = g.num_vertices();
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> dist(n, inf);
  std::vector<int> parent_edge(n, -1);
  std::vector<char> done(n, 0);
  using Item = std::pair<double, int>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
  dist[g.source()] = 0.0;
  pq.push({0.0, g.source()});
  while (!pq.empty()) {
    auto [d, v] = pq.top();
    pq.pop();
    if (done[v]) continue;
    done[v] = 1;
    for (int e : g.incident(v)) {
      if (!allowed.test(e)) continue;
      int w = g.other_end(e, v);
      double nd = d + costs[e];
      if (nd < dist[w]) {
        dist[w] = nd;
        parent_edge[w] = e;
        pq.push({nd, w});
      }
    }
  }
  if (dist[g.sink()] == inf) return std::nullopt;
  ElementSet path(g.num_edges());
  int v = g.sink();
  while (v != g.source()) {
    int e = parent_edge[v];
    path.set(e);
    v = g.other_end(e, v);
  }
  return path;
}

/// True iff t is reachable from s using only edges in `s`.
inline bool st_connected_within(const Graph& g, const ElementSet& s) {
  std::vector<char> seen(g.num_vertices(), 0);
  std::deque<int> queue{g.source()};
  seen[g.source()] = 1;
  while (!queue.empty()) {
    int v = queue.front();
    queue.pop_front();
    if (v == g.sink()) return true;
    for (int e : g.incident(v)) {
      if (!s.test(e)) continue;
      int w = g.other_end(e, v);
      if (!seen[w]) {
        seen[w] = 1;
        queue.push_back(w);
      }
    }
  }
  return false;
}

/// True iff the edge set is exactly a simple s-t path.
inline bool is_simple_st_path(const Graph& g, const ElementSet& s) {
  if (s.none()) return false;
  std::vector<int> degree(g.num_vertices(), 0);
  for (auto e = s.find_first(); e != ElementSet::npos; e = s.find_next(e)) {
    ++degree[g.edge(e).u];
    ++degree[g.edge(e).v];
  }
  if (degree[g.source()] != 1 || degree[g.sink()] != 1) return false;
  int touched = 0;
  for (int v = 0; v < g.num_vertices(); ++v) {
    if (degree[v] == 0) continue;
    ++touched;
    if (v != g.source() && v != g.sink() && degree[v] != 2) return false;
  }
  // connected and acyclic: a path on k edges touches exactly k+1 vertices
  if (touched != static_cast<int>(s.count()) + 1) return false;
  return st_connected_within(g, s);
}

/// True iff removing the edge set `s` disconnects s from t.
inline bool removal_disconnects_st(const Graph& g, const ElementSet& s) {
  ElementSet rest = ~s;
  return !st_connected_within(g, rest);
}

/// True iff `s` is a perfect matching: every vertex has degree exactly one.
inline bool is_perfect_matching(const Graph& g, const ElementSet& s) {
  std::vector<int> degree(g.num_vertices(), 0);
  for (auto e = s.find_first(); e != ElementSet::npos; e = s.find_next(e)) {
    ++degree[g.edge(e).u];
    ++degree[g.edge(e).v];
  }
  for (int v = 0; v < g.num_vertices(); ++v)
    if (degree[v] != 1) return false;
  return true;
}

namespace detail {
inline bool kuhn_augment(const Graph& g, const ElementSet& allowed, int u,
                         std::vector<int>& match_of_right, std::vector<char>& visited) {
  for (int e : g.incident(u)) {
    if (!allowed.test(e)) continue;
    int v = g.other_end(e, u);
    if (visited[v]) continue;
    visited[v] = 1;
    if (match_of_right[v] < 0 ||
        kuhn_augment(g, allowed, match_of_right[v], match_of_right, visited)) {
      match_of_right[v] = u;
      return true;
    }
  }
  return false;
}
}  // namespace detail

/// Maximum bipartite matching size within the allowed edges (augmenting
/// paths).
inline int max_bipartite_matching_size(const Graph& g, const ElementSet& allowed) {
  const int left = g.left_size();
  std::vector<int> match_of_right(g.num_vertices(), -1);
  int size = 0;
  for (int u = 0; u < left; ++u) {
    std::vector<char> visited(g.num_vertices(), 0);
    if (detail::kuhn_augment(g, allowed, u, match_of_right, visited)) ++size;
  }
  return size;
}

}  // namespace rsm
