#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>
#include <vector>

#include "rsm/element_set.hpp"
#include "rsm/modular_bounds.hpp"
#include "rsm/set_function.hpp"

namespace rsm {

/// Family of l affine surrogates a_i + c_i(X) with a_i, c_i >= 0 (monotone
/// supergradients guarantee the signs). Evaluation is the pointwise max.
class AffineFamily {
 public:
  struct Member {
    double constant = 0.0;
    std::vector<double> weights;
  };

  explicit AffineFamily(std::vector<Member> members) : members_(std::move(members)) {
    if (members_.empty()) throw std::invalid_argument("AffineFamily: needs l >= 1 members");
    n_ = static_cast<int>(members_.front().weights.size());
    for (const Member& m : members_) {
      if (static_cast<int>(m.weights.size()) != n_)
        throw std::invalid_argument("AffineFamily: member length mismatch");
      if (!(m.constant >= 0.0))
        throw std::invalid_argument("AffineFamily: constants must be nonnegative");
      for (double w : m.weights)
        if (!(w >= 0.0)) throw std::invalid_argument("AffineFamily: weights must be nonnegative");
    }
  }

  static AffineFamily from_bounds(const std::vector<ModularBound>& bounds) {
    std::vector<Member> members;
    members.reserve(bounds.size());
    for (const ModularBound& b : bounds)
      members.push_back({b.surrogate.constant(), b.surrogate.weights()});
    return AffineFamily(std::move(members));
  }

  static AffineFamily from_weight_vectors(std::vector<std::vector<double>> weights) {
    std::vector<Member> members;
    members.reserve(weights.size());
    for (auto& w : weights) members.push_back({0.0, std::move(w)});
    return AffineFamily(std::move(members));
  }

  int size() const { return static_cast<int>(members_.size()); }
  int ground_size() const { return n_; }
  const Member& member(int i) const { return members_.at(i); }
  const std::vector<Member>& members() const { return members_; }

  double eval_member(int i, const ElementSet& s) const {
    const Member& m = members_.at(i);
    double acc = m.constant;
    for (auto j = s.find_first(); j != ElementSet::npos; j = s.find_next(j)) acc += m.weights[j];
    return acc;
  }

  double eval(const ElementSet& s) const {
    double best = eval_member(0, s);
    for (int i = 1; i < size(); ++i) best = std::max(best, eval_member(i, s));
    return best;
  }

 private:
  std::vector<Member> members_;
  int n_ = 0;
};

/// F~(X) = (1/l) sum_i f_i(X); satisfies F~ <= F <= l F~.
inline ModularFunction avg_surrogate(const AffineFamily& fam) {
  const double inv = 1.0 / fam.size();
  std::vector<double> weights(fam.ground_size(), 0.0);
  double constant = 0.0;
  for (const auto& m : fam.members()) {
    constant += inv * m.constant;
    for (int j = 0; j < fam.ground_size(); ++j) weights[j] += inv * m.weights[j];
  }
  return ModularFunction(std::move(weights), constant);
}

/// F^(X) = max_i a_i + sum_{j in X} max_i c_i(j); satisfies F <= F^ <= l F.
inline ModularFunction max_surrogate(const AffineFamily& fam) {
  std::vector<double> weights(fam.ground_size(), 0.0);
  double constant = 0.0;
  for (const auto& m : fam.members()) {
    constant = std::max(constant, m.constant);
    for (int j = 0; j < fam.ground_size(); ++j)
      weights[j] = std::max(weights[j], m.weights[j]);
  }
  return ModularFunction(std::move(weights), constant);
}

/// Power mean F_a(X) = (sum_i f_i(X)^a)^(1/a), rescaled by the max member so
/// large exponents cannot overflow. F <= F_a <= l^(1/a) F.
inline double power_mean_value(const AffineFamily& fam, int a, const ElementSet& s) {
  if (a < 1) throw std::invalid_argument("power_mean_value: exponent must be >= 1");
  double top = 0.0;
  std::vector<double> values(fam.size());
  for (int i = 0; i < fam.size(); ++i) {
    values[i] = fam.eval_member(i, s);
    top = std::max(top, values[i]);
  }
  if (top <= 0.0) return 0.0;
  double acc = 0.0;
  for (double v : values) acc += std::pow(v / top, a);
  return top * std::pow(acc, 1.0 / a);
}

}  // namespace rsm
