#pragma once

#include <algorithm>
#include <cmath>
#include <memory>
#include <stdexcept>
#include <utility>
#include <vector>

#include "rsm/element_set.hpp"

namespace rsm {

/// Curvature-interpolated factor K(v, kappa) = v / (1 + (1 - kappa)(v - 1)).
/// K(v, 1) = v, K(v, 0) = 1; nondecreasing in both arguments for v >= 1.
inline double kappa_factor(double v, double kappa) {
  if (!(v >= 1.0)) throw std::invalid_argument("kappa_factor: v must be >= 1");
  if (!(kappa >= 0.0 && kappa <= 1.0))
    throw std::invalid_argument("kappa_factor: kappa must lie in [0,1]");
  return v / (1.0 + (1.0 - kappa) * (v - 1.0));
}

struct CurvatureInfo {
  double kappa = 0.0;
  /// Some marginal f(j|0) is zero; the defining ratio is ill-formed and
  /// kappa = 1 is reported as the conservative value.
  bool degenerate = false;
};

/// Monotone set function over an indexed ground set. Evaluation is pure and
/// deterministic; instances are immutable after construction and safe to
/// share across threads. Marginals f(j|0) and f(j|V-j) are cached at
/// construction since curvature and the modular bounds reuse them heavily.
class SetFunction {
 public:
  virtual ~SetFunction() = default;

  int ground_size() const { return n_; }

  double eval(const ElementSet& s) const {
    check_shape(s);
    return eval_impl(s);
  }

  /// f(j | S) = f(S + j) - f(S). Requires j not in S.
  double gain(int j, const ElementSet& s) const {
    check_shape(s);
    check_index(j);
    if (s.test(j)) throw std::invalid_argument("gain: element already in set");
    ElementSet t = s;
    t.set(j);
    return eval_impl(t) - eval_impl(s);
  }

  double empty_value() const { return empty_value_; }
  double full_value() const { return full_value_; }

  /// Cached f(j | 0).
  double singleton_gain(int j) const {
    check_index(j);
    return singleton_gains_[j];
  }

  /// Cached f(j | V - j).
  double top_gain(int j) const {
    check_index(j);
    return top_gains_[j];
  }

  /// kappa_f = 1 - min_j f(j|V-j) / f(j|0), clamped to [0,1]. Marginals at
  /// the empty set are used as the denominator so the constant offset of a
  /// modular surrogate does not register as curvature.
  CurvatureInfo curvature_info() const {
    CurvatureInfo info;
    double min_ratio = 1.0;
    for (int j = 0; j < n_; ++j) {
      if (singleton_gains_[j] <= 0.0) {
        info.degenerate = true;
        info.kappa = 1.0;
        return info;
      }
      min_ratio = std::min(min_ratio, top_gains_[j] / singleton_gains_[j]);
    }
    info.kappa = std::clamp(1.0 - min_ratio, 0.0, 1.0);
    return info;
  }

  double curvature() const { return curvature_info().kappa; }

 protected:
  explicit SetFunction(int n) : n_(n) {
    if (n_ <= 0) throw std::invalid_argument("SetFunction: ground size must be positive");
  }

  virtual double eval_impl(const ElementSet& s) const = 0;

  /// Derived constructors call this last, once their own state is in place.
  void cache_marginals() {
    ElementSet empty(n_);
    ElementSet full(n_);
    full.set();
    empty_value_ = eval_impl(empty);
    full_value_ = eval_impl(full);
    singleton_gains_.resize(n_);
    top_gains_.resize(n_);
    ElementSet sing(n_), co(n_);
    for (int j = 0; j < n_; ++j) {
      sing = empty;
      sing.set(j);
      singleton_gains_[j] = eval_impl(sing) - empty_value_;
      co = full;
      co.reset(j);
      top_gains_[j] = full_value_ - eval_impl(co);
    }
  }

  void check_shape(const ElementSet& s) const {
    if (static_cast<int>(s.size()) != n_)
      throw std::invalid_argument("SetFunction: set size does not match ground set");
  }

  void check_index(int j) const {
    if (j < 0 || j >= n_) throw std::out_of_range("SetFunction: element index out of range");
  }

 private:
  int n_;
  double empty_value_ = 0.0;
  double full_value_ = 0.0;
  std::vector<double> singleton_gains_;
  std::vector<double> top_gains_;
};

using SetFunctionPtr = std::shared_ptr<const SetFunction>;

/// f(X) = constant + sum_{j in X} w_j with w >= 0, constant >= 0. The
/// constant term is where majorization surrogates keep their anchor offset.
class ModularFunction final : public SetFunction {
 public:
  explicit ModularFunction(std::vector<double> weights, double constant = 0.0)
      : SetFunction(static_cast<int>(weights.size())),
        weights_(std::move(weights)),
        constant_(constant) {
    for (double w : weights_) {
      if (!std::isfinite(w)) throw std::invalid_argument("ModularFunction: weights must be finite");
      if (w < 0.0) throw std::invalid_argument("ModularFunction: weights must be nonnegative");
    }
    if (!std::isfinite(constant_) || constant_ < 0.0)
      throw std::invalid_argument("ModularFunction: constant must be finite and nonnegative");
    cache_marginals();
  }

  const std::vector<double>& weights() const { return weights_; }
  double constant() const { return constant_; }

  double weighted_sum(const ElementSet& s) const {
    double acc = 0.0;
    for (auto i = s.find_first(); i != ElementSet::npos; i = s.find_next(i)) acc += weights_[i];
    return acc;
  }

 private:
  double eval_impl(const ElementSet& s) const override { return constant_ + weighted_sum(s); }

  std::vector<double> weights_;
  double constant_;
};

/// f(X) = sum_i (w(X ∩ C_i))^p for clusters C_1..C_k (a partition or a
/// cover), base weights w >= 0 and concave exponent p in (0, 1].
class ConcaveOverModular final : public SetFunction {
 public:
  ConcaveOverModular(std::vector<ElementSet> clusters, std::vector<double> weights,
                     double exponent = 0.5)
      : SetFunction(static_cast<int>(weights.size())),
        clusters_(std::move(clusters)),
        weights_(std::move(weights)),
        exponent_(exponent) {
    if (!(exponent_ > 0.0 && exponent_ <= 1.0))
      throw std::invalid_argument("ConcaveOverModular: exponent must lie in (0,1]");
    for (double w : weights_)
      if (!std::isfinite(w) || w < 0.0)
        throw std::invalid_argument("ConcaveOverModular: weights must be nonnegative");
    for (const ElementSet& c : clusters_)
      if (static_cast<int>(c.size()) != ground_size())
        throw std::invalid_argument("ConcaveOverModular: cluster size mismatch");
    cache_marginals();
  }

  const std::vector<ElementSet>& clusters() const { return clusters_; }
  const std::vector<double>& weights() const { return weights_; }
  double exponent() const { return exponent_; }

 private:
  double eval_impl(const ElementSet& s) const override {
    double total = 0.0;
    for (const ElementSet& c : clusters_) {
      ElementSet inter = s & c;
      double mass = 0.0;
      for (auto i = inter.find_first(); i != ElementSet::npos; i = inter.find_next(i))
        mass += weights_[i];
      total += std::pow(mass, exponent_);
    }
    return total;
  }

  std::vector<ElementSet> clusters_;
  std::vector<double> weights_;
  double exponent_;
};

/// f(X) = sqrt(sum_{j in X} w_j), w >= 0. The shape the ellipsoidal
/// surrogates take.
class SqrtModular final : public SetFunction {
 public:
  explicit SqrtModular(std::vector<double> weights)
      : SetFunction(static_cast<int>(weights.size())), weights_(std::move(weights)) {
    for (double w : weights_)
      if (!std::isfinite(w) || w < 0.0)
        throw std::invalid_argument("SqrtModular: weights must be nonnegative");
    cache_marginals();
  }

  const std::vector<double>& weights() const { return weights_; }

 private:
  double eval_impl(const ElementSet& s) const override {
    double acc = 0.0;
    for (auto i = s.find_first(); i != ElementSet::npos; i = s.find_next(i)) acc += weights_[i];
    return std::sqrt(acc);
  }

  std::vector<double> weights_;
};

/// f(X) = sum_k coef_k * g_k(X). Coefficients may be negative (the
/// curve-normalized form needs that); the caller is responsible for the
/// combination staying monotone.
class ScaledSum final : public SetFunction {
 public:
  using Term = std::pair<double, SetFunctionPtr>;

  explicit ScaledSum(std::vector<Term> terms)
      : SetFunction(terms.empty() ? 0 : terms.front().second->ground_size()),
        terms_(std::move(terms)) {
    if (terms_.empty()) throw std::invalid_argument("ScaledSum: needs at least one term");
    for (const Term& t : terms_) {
      if (!t.second) throw std::invalid_argument("ScaledSum: null term");
      if (t.second->ground_size() != ground_size())
        throw std::invalid_argument("ScaledSum: ground size mismatch");
      if (!std::isfinite(t.first)) throw std::invalid_argument("ScaledSum: coefficient not finite");
    }
    cache_marginals();
  }

  const std::vector<Term>& terms() const { return terms_; }

 private:
  double eval_impl(const ElementSet& s) const override {
    double acc = 0.0;
    for (const Term& t : terms_) acc += t.first * t.second->eval(s);
    return acc;
  }

  std::vector<Term> terms_;
};

/// f_avg = (1/l) sum_i f_i.
inline SetFunctionPtr make_average(const std::vector<SetFunctionPtr>& fs) {
  if (fs.empty()) throw std::invalid_argument("make_average: empty list");
  std::vector<ScaledSum::Term> terms;
  terms.reserve(fs.size());
  const double coef = 1.0 / static_cast<double>(fs.size());
  for (const SetFunctionPtr& f : fs) terms.emplace_back(coef, f);
  return std::make_shared<ScaledSum>(std::move(terms));
}

/// Pointwise maximum of l monotone set functions; the Robust-SubMin
/// objective. Not itself submodular, so not a SetFunction.
class RobustObjective {
 public:
  explicit RobustObjective(std::vector<SetFunctionPtr> functions)
      : functions_(std::move(functions)) {
    if (functions_.empty()) throw std::invalid_argument("RobustObjective: needs l >= 1 functions");
    for (const SetFunctionPtr& f : functions_) {
      if (!f) throw std::invalid_argument("RobustObjective: null function");
      if (f->ground_size() != functions_.front()->ground_size())
        throw std::invalid_argument("RobustObjective: ground size mismatch");
    }
  }

  int size() const { return static_cast<int>(functions_.size()); }
  int ground_size() const { return functions_.front()->ground_size(); }
  const SetFunctionPtr& function(int i) const { return functions_.at(i); }
  const std::vector<SetFunctionPtr>& functions() const { return functions_; }

  double eval(const ElementSet& s) const { return eval_worst(s).first; }

  /// (max value, attaining index); ties resolve to the smallest index.
  std::pair<double, int> eval_worst(const ElementSet& s) const {
    double best = functions_[0]->eval(s);
    int index = 0;
    for (int i = 1; i < size(); ++i) {
      double v = functions_[i]->eval(s);
      if (v > best) {
        best = v;
        index = i;
      }
    }
    return {best, index};
  }

  /// Worst-case curvature max_i kappa_{f_i}.
  double worst_curvature() const {
    double k = 0.0;
    for (const SetFunctionPtr& f : functions_) k = std::max(k, f->curvature());
    return k;
  }

 private:
  std::vector<SetFunctionPtr> functions_;
};

}  // namespace rsm
