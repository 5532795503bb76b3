#pragma once

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "rsm/set_function.hpp"

namespace rsm {

/// Permutation of 0..n-1 ordering x descending; ties break toward the
/// smaller element index so chains (and everything downstream of them) are
/// deterministic.
inline std::vector<int> descending_order(const std::vector<double>& x) {
  std::vector<int> order(x.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return x[a] > x[b]; });
  return order;
}

/// Greedy extreme point h of the submodular polyhedron for the chain induced
/// by `order`: h[order[i]] = f(S_i) - f(S_{i-1}) with S_i the first i
/// elements of the chain.
inline std::vector<double> chain_extreme_point(const SetFunction& f,
                                               const std::vector<int>& order) {
  const int n = f.ground_size();
  if (static_cast<int>(order.size()) != n)
    throw std::invalid_argument("chain_extreme_point: order length mismatch");
  std::vector<double> h(n);
  ElementSet prefix(n);
  double prev = f.eval(prefix);
  for (int i = 0; i < n; ++i) {
    prefix.set(order[i]);
    double cur = f.eval(prefix);
    h[order[i]] = cur - prev;
    prev = cur;
  }
  return h;
}

struct LovaszResult {
  double value = 0.0;
  std::vector<double> subgradient;
};

/// Lovasz extension by the sorted greedy rule: value = f(0) + <h_sigma_x, x>
/// with sigma_x the descending order of x. The subgradient is the extreme
/// point h_sigma_x itself. Agrees with f on indicator vectors exactly.
inline LovaszResult lovasz(const SetFunction& f, const std::vector<double>& x) {
  if (static_cast<int>(x.size()) != f.ground_size())
    throw std::invalid_argument("lovasz: vector length does not match ground set");
  LovaszResult r;
  r.subgradient = chain_extreme_point(f, descending_order(x));
  r.value = f.empty_value();
  for (std::size_t i = 0; i < x.size(); ++i) r.value += r.subgradient[i] * x[i];
  return r;
}

}  // namespace rsm
