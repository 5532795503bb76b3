#pragma once

#include <algorithm>
#include <cmath>
#include <memory>
#include <stdexcept>
#include <vector>

#include "rsm/lovasz.hpp"
#include "rsm/set_function.hpp"

namespace rsm {

enum class BoundKind { LowerSubgradient, Upper1, Upper2, UpperEmpty };

/// Affine surrogate (constant + per-element weights) tagged with the anchor
/// set it is tight at. Lower kinds minorize f everywhere, upper kinds
/// dominate it; both agree with f at the anchor.
struct ModularBound {
  ModularFunction surrogate;
  ElementSet anchor;
  BoundKind kind;

  double eval(const ElementSet& s) const { return surrogate.eval(s); }
};

namespace detail {
inline double clamp_nonneg(double v) { return v < 0.0 ? 0.0 : v; }
}  // namespace detail

/// Subgradient lower bound h_Y: the chain extreme point for a permutation
/// that lists Y first (ascending index inside each block). Tight at Y,
/// h_Y(X) <= f(X) everywhere.
inline ModularBound modular_lower_bound(const SetFunction& f, const ElementSet& y) {
  const int n = f.ground_size();
  std::vector<int> order;
  order.reserve(n);
  for (int j = 0; j < n; ++j)
    if (y.test(j)) order.push_back(j);
  for (int j = 0; j < n; ++j)
    if (!y.test(j)) order.push_back(j);
  std::vector<double> h = chain_extreme_point(f, order);
  for (double& w : h) w = detail::clamp_nonneg(w);
  return ModularBound{ModularFunction(std::move(h), f.empty_value()), y,
                      BoundKind::LowerSubgradient};
}

/// Supergradient upper bounds, variants 1 and 2:
///   m1(Y) = f(X) - sum_{j in X\Y} f(j|X-j) + sum_{j in Y\X} f(j|0)
///   m2(Y) = f(X) - sum_{j in X\Y} f(j|V-j) + sum_{j in Y\X} f(j|X)
/// stored affinely so min-max subproblems see plain linear costs.
inline ModularBound modular_upper_bound(const SetFunction& f, const ElementSet& x, int variant) {
  if (variant != 1 && variant != 2)
    throw std::invalid_argument("modular_upper_bound: variant must be 1 or 2");
  const int n = f.ground_size();
  if (static_cast<int>(x.size()) != n)
    throw std::invalid_argument("modular_upper_bound: anchor size mismatch");

  const double fx = f.eval(x);
  std::vector<double> weights(n);
  double constant = fx;
  const bool empty_anchor = x.none();

  if (variant == 1) {
    ElementSet without(n);
    for (int j = 0; j < n; ++j) {
      if (x.test(j)) {
        without = x;
        without.reset(j);
        double g = f.gain(j, without);
        weights[j] = detail::clamp_nonneg(g);
        constant -= g;
      } else {
        weights[j] = detail::clamp_nonneg(f.singleton_gain(j));
      }
    }
  } else {
    for (int j = 0; j < n; ++j) {
      if (x.test(j)) {
        double g = f.top_gain(j);
        weights[j] = detail::clamp_nonneg(g);
        constant -= g;
      } else {
        weights[j] = detail::clamp_nonneg(f.gain(j, x));
      }
    }
  }

  BoundKind kind = empty_anchor ? BoundKind::UpperEmpty
                                : (variant == 1 ? BoundKind::Upper1 : BoundKind::Upper2);
  return ModularBound{ModularFunction(std::move(weights), detail::clamp_nonneg(constant)), x,
                      kind};
}

/// Curve-normalized version f^k(X) = [f(X) - (1-k) sum_{j in X} f(j)] / k
/// with k = kappa_f. Monotone submodular whenever f is; undefined for
/// modular f (kappa = 0).
inline SetFunctionPtr curve_normalized(const SetFunctionPtr& f) {
  if (!f) throw std::invalid_argument("curve_normalized: null function");
  const double kappa = f->curvature();
  if (kappa < 1e-12)
    throw std::domain_error("curve_normalized: not applicable, function is modular (kappa = 0)");
  if (kappa >= 1.0) return f;  // formula collapses to f itself
  std::vector<double> singles(f->ground_size());
  for (int j = 0; j < f->ground_size(); ++j)
    singles[j] = detail::clamp_nonneg(f->singleton_gain(j));
  std::vector<ScaledSum::Term> terms;
  terms.emplace_back(1.0 / kappa, f);
  terms.emplace_back(-(1.0 - kappa) / kappa,
                     std::make_shared<ModularFunction>(std::move(singles)));
  return std::make_shared<ScaledSum>(std::move(terms));
}

/// Weight source for the sqrt-of-modular surrogate standing in for the
/// generic ellipsoidal approximation:
///  - ExactSqrt: f already is sqrt(w(X)); its own weights (exact).
///  - GainSquared: w_j = f(j|V-j)^2; sqrt(w(X)) <= f(X) by telescoping.
///  - UserWeights: caller-supplied; the caller owns the sandwich property.
struct EaProvider {
  enum class Kind { ExactSqrt, GainSquared, UserWeights };
  Kind kind = Kind::GainSquared;
  std::vector<double> user_weights;

  static EaProvider exact_sqrt() { return {Kind::ExactSqrt, {}}; }
  static EaProvider gain_squared() { return {Kind::GainSquared, {}}; }
  static EaProvider user(std::vector<double> w) { return {Kind::UserWeights, std::move(w)}; }
};

struct EaSurrogate {
  std::shared_ptr<const SqrtModular> lower;  // sqrt(w(X)) <= f(X)
  SetFunctionPtr combined;                   // kappa-mixed form, also <= f
  std::vector<double> weights;               // w backing `lower`
};

namespace detail {
inline std::vector<double> gain_squared_weights(const SetFunction& f) {
  std::vector<double> w(f.ground_size());
  for (int j = 0; j < f.ground_size(); ++j) {
    double g = clamp_nonneg(f.top_gain(j));
    w[j] = g * g;
  }
  return w;
}
}  // namespace detail

/// Curve-normalized EA surrogate
///   f_ea(X) = kappa * sqrt(w^{f^k}(X)) + (1-kappa) * sum_{j in X} f(j)
/// with `lower` the plain sqrt(w^f(X)) used by the linear min-max reduction.
inline EaSurrogate ea_surrogate(const SetFunctionPtr& f, const EaProvider& provider) {
  if (!f) throw std::invalid_argument("ea_surrogate: null function");
  const int n = f->ground_size();
  EaSurrogate out;

  if (provider.kind == EaProvider::Kind::ExactSqrt) {
    auto sqrt_form = std::dynamic_pointer_cast<const SqrtModular>(f);
    if (!sqrt_form)
      throw std::invalid_argument("ea_surrogate: exact-sqrt provider needs a SqrtModular input");
    out.weights = sqrt_form->weights();
    out.lower = sqrt_form;
    out.combined = sqrt_form;  // already exact, mixing is a no-op
    return out;
  }

  if (provider.kind == EaProvider::Kind::UserWeights) {
    if (static_cast<int>(provider.user_weights.size()) != n)
      throw std::invalid_argument("ea_surrogate: user weight length mismatch");
    out.weights = provider.user_weights;
  } else {
    out.weights = detail::gain_squared_weights(*f);
  }
  out.lower = std::make_shared<SqrtModular>(out.weights);

  const double kappa = f->curvature();
  std::vector<double> singles(n);
  for (int j = 0; j < n; ++j) singles[j] = detail::clamp_nonneg(f->singleton_gain(j));

  if (kappa < 1e-12) {
    // modular input: the mixed form is the function itself
    out.combined = std::make_shared<ModularFunction>(std::move(singles));
    return out;
  }

  std::vector<double> wk;
  if (provider.kind == EaProvider::Kind::UserWeights) {
    wk = provider.user_weights;
  } else if (kappa >= 1.0) {
    wk = out.weights;  // f^k = f
  } else {
    wk = detail::gain_squared_weights(*curve_normalized(f));
  }

  if (kappa >= 1.0) {
    out.combined = std::make_shared<SqrtModular>(std::move(wk));
    return out;
  }
  std::vector<ScaledSum::Term> terms;
  terms.emplace_back(kappa, std::make_shared<SqrtModular>(std::move(wk)));
  terms.emplace_back(1.0 - kappa, std::make_shared<ModularFunction>(std::move(singles)));
  out.combined = std::make_shared<ScaledSum>(std::move(terms));
  return out;
}

}  // namespace rsm
