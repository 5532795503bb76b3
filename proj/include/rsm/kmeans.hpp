#pragma once

#include <cstdint>
#include <limits>
#include <random>
#include <stdexcept>
#include <vector>

namespace rsm {

struct Point2 {
  double x = 0.0;
  double y = 0.0;
};

inline double squared_distance(const Point2& a, const Point2& b) {
  double dx = a.x - b.x, dy = a.y - b.y;
  return dx * dx + dy * dy;
}

/// Lloyd's algorithm with seeded random-point initialization, squared
/// Euclidean distances, at most 100 iterations or a label fixpoint.
/// Deterministic per seed; an emptied cluster is re-seeded to the point
/// farthest from its assigned centroid. Nearest-centroid ties go to the
/// smaller centroid index.
inline std::vector<int> kmeans(const std::vector<Point2>& points, int k, std::uint64_t seed) {
  const int n = static_cast<int>(points.size());
  if (k < 1 || k > n) throw std::invalid_argument("kmeans: need 1 <= k <= #points");

  // partial Fisher-Yates for k distinct starting points
  std::mt19937_64 rng(seed);
  std::vector<int> ids(n);
  for (int i = 0; i < n; ++i) ids[i] = i;
  for (int i = 0; i < k; ++i) {
    std::uniform_int_distribution<int> pick(i, n - 1);
    std::swap(ids[i], ids[pick(rng)]);
  }
  std::vector<Point2> centroids(k);
  for (int c = 0; c < k; ++c) centroids[c] = points[ids[c]];

  std::vector<int> labels(n, -1);
  for (int iter = 0; iter < 100; ++iter) {
    bool changed = false;
    for (int i = 0; i < n; ++i) {
      int best = 0;
      double best_d = squared_distance(points[i], centroids[0]);
      for (int c = 1; c < k; ++c) {
        double d = squared_distance(points[i], centroids[c]);
        if (d < best_d) {
          best_d = d;
          best = c;
        }
      }
      if (labels[i] != best) {
        labels[i] = best;
        changed = true;
      }
    }

    std::vector<Point2> sums(k);
    std::vector<int> counts(k, 0);
    for (int i = 0; i < n; ++i) {
      sums[labels[i]].x += points[i].x;
      sums[labels[i]].y += points[i].y;
      ++counts[labels[i]];
    }
    for (int c = 0; c < k; ++c) {
      if (counts[c] > 0) {
        centroids[c] = {sums[c].x / counts[c], sums[c].y / counts[c]};
        continue;
      }
      // re-seed an empty cluster to the globally farthest point
      int far = 0;
      double far_d = -1.0;
      for (int i = 0; i < n; ++i) {
        double d = squared_distance(points[i], centroids[labels[i]]);
        if (d > far_d) {
          far_d = d;
          far = i;
        }
      }
      centroids[c] = points[far];
      labels[far] = c;
      changed = true;
    }
    if (!changed) break;
  }
  return labels;
}

}  // namespace rsm
