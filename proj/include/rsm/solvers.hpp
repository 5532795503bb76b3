#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "rsm/covering.hpp"
#include "rsm/lovasz.hpp"
#include "rsm/modular_bounds.hpp"
#include "rsm/robust_instance.hpp"
#include "rsm/robust_modular.hpp"

namespace rsm {

struct TracePoint {
  int iteration = 0;
  double surrogate_value = 0.0;
  double true_value = 0.0;
};

struct SolveReport {
  std::string algorithm;
  ElementSet set;
  double value = std::numeric_limits<double>::quiet_NaN();
  std::vector<TracePoint> trace;
  int iterations = 0;
  /// Table-1-style factor evaluated at the returned set size (documentation
  /// only; the oracle suites compute their own bounds). NaN where the
  /// surrogate weights carry no certified tightness (EA heuristic provider).
  double factor_hint = std::numeric_limits<double>::quiet_NaN();
  double inner_beta = 1.0;
  bool ok = true;
  std::string message;
  // continuous-relaxation extras
  double continuous_value = std::numeric_limits<double>::quiet_NaN();
  bool projection_converged = true;
};

enum class UpperBoundVariant { One, Two, Alternate };

struct MMinOptions {
  UpperBoundVariant variant = UpperBoundVariant::Alternate;
  int max_iterations = 50;
  double rel_tol = 1e-6;
  std::vector<MinMaxStrategy> strategies;  // empty = defaults per constraint
  /// Extra runs from random feasible anchors (best-of merge); 0 keeps the
  /// plain empty-anchor algorithm the first-iteration bound is proved for.
  int random_restarts = 0;
  std::uint64_t seed = 0;
  GraduatedAssignmentSchedule ga;
};

struct AAOptions {
  enum class Inner { MMinSingle, EaSingle };
  Inner inner = Inner::MMinSingle;
  MMinOptions mmin;
  EaProvider provider = EaProvider::gain_squared();
  std::vector<MinMaxStrategy> strategies;
  GraduatedAssignmentSchedule ga;
};

struct EaOptions {
  EaProvider provider = EaProvider::gain_squared();
  std::vector<MinMaxStrategy> strategies;  // empty = defaults per constraint
  GraduatedAssignmentSchedule ga;
};

struct CROptions {
  enum class StepRule { SqrtT, Fixed, Polyak };
  StepRule step_rule = StepRule::SqrtT;
  double step_scale = 1.0;
  int max_iterations = 500;
  double projection_tol = 1e-7;
  double convergence_tol = 1e-6;
  int patience = 50;              // non-improving iterations before stopping
  int projection_rounds = 20000;  // cyclic-correction cap per projection
};

struct RobustLovaszResult {
  double value = 0.0;
  int worst = 0;
  std::vector<double> subgradient;
};

/// g(x) = max_i f_i^hat(x) with a subgradient from the worst index (ties to
/// the smallest index). One shared sort drives all l chain evaluations.
inline RobustLovaszResult robust_lovasz(const RobustObjective& obj,
                                        const std::vector<double>& x) {
  std::vector<int> order = descending_order(x);
  RobustLovaszResult out;
  out.value = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < obj.size(); ++i) {
    std::vector<double> h = chain_extreme_point(*obj.function(i), order);
    double v = obj.function(i)->empty_value();
    for (std::size_t j = 0; j < x.size(); ++j) v += h[j] * x[j];
    if (v > out.value) {
      out.value = v;
      out.worst = i;
      out.subgradient = std::move(h);
    }
  }
  return out;
}

struct ChainRounding {
  ElementSet set;
  int prefix_size = 0;
  double threshold = 0.0;  // smallest coordinate inside the chosen prefix
};

/// Chain rounding: sort coordinates descending (ties to the smaller index),
/// take the smallest prefix whose monotone closure meets the constraint,
/// then shrink it to a minimal feasible subset with one unit-cost restricted
/// linear minimization.
inline ChainRounding round_chain_detailed(const std::vector<double>& x, const Constraint& c) {
  if (static_cast<int>(x.size()) != c.ground_size())
    throw std::invalid_argument("round_chain: vector length mismatch");
  std::vector<int> order = descending_order(x);
  ElementSet prefix(c.ground_size());
  for (int k = 0; k < c.ground_size(); ++k) {
    prefix.set(order[k]);
    if (c.contains_feasible(prefix)) {
      ChainRounding out;
      out.prefix_size = k + 1;
      out.threshold = x[order[k]];
      out.set = c.linear_minimize_within(std::vector<double>(c.ground_size(), 1.0), prefix);
      return out;
    }
  }
  throw std::logic_error("round_chain: no feasible prefix (point outside the polytope?)");
}

inline ElementSet round_chain(const std::vector<double>& x, const Constraint& c) {
  return round_chain_detailed(x, c).set;
}

namespace detail {

inline std::vector<ModularBound> bounds_at(const RobustObjective& obj, const ElementSet& anchor,
                                           int variant) {
  std::vector<ModularBound> bounds;
  bounds.reserve(obj.size());
  for (int i = 0; i < obj.size(); ++i)
    bounds.push_back(modular_upper_bound(*obj.function(i), anchor, variant));
  return bounds;
}

inline int pick_variant(UpperBoundVariant v, int iteration) {
  switch (v) {
    case UpperBoundVariant::One: return 1;
    case UpperBoundVariant::Two: return 2;
    case UpperBoundVariant::Alternate: return iteration % 2 == 0 ? 1 : 2;
  }
  return 1;
}

/// One majorize-minimize pass from a fixed anchor. Accepts a step only on
/// strict true-objective improvement (rel-tol), reports best-seen.
inline void mmin_from_anchor(const RobustInstance& inst, const MMinOptions& opts,
                             ElementSet anchor, SolveReport& report) {
  const Constraint& c = inst.constraint;
  double incumbent = std::numeric_limits<double>::infinity();
  for (int t = 0; t < opts.max_iterations; ++t) {
    AffineFamily fam =
        AffineFamily::from_bounds(bounds_at(inst.objective, anchor, pick_variant(opts.variant, t)));
    MinMaxSolution sub = solve_robust_min(fam, c, opts.strategies, opts.ga);
    double true_value = inst.objective.eval(sub.set);
    report.trace.push_back({static_cast<int>(report.trace.size()), sub.value, true_value});
    report.inner_beta = sub.beta;
    if (true_value < report.value || report.set.empty()) {
      report.set = sub.set;
      report.value = true_value;
    }
    bool improved = true_value < incumbent - opts.rel_tol * std::max(1.0, std::abs(incumbent));
    if (!improved) break;
    incumbent = true_value;
    anchor = sub.set;
  }
}

}  // namespace detail

/// Majorization-minimization (Eq.-(5)-style loop): replace every f_i by a
/// modular upper bound at the current anchor, solve the min-max subproblem,
/// move only while the true objective strictly improves. Starts at the empty
/// anchor; optional extra random anchors merge by best value.
inline SolveReport mmin(const RobustInstance& inst, const MMinOptions& opts = {}) {
  SolveReport report;
  report.algorithm = "mmin";
  report.value = std::numeric_limits<double>::infinity();
  report.set = ElementSet();

  detail::mmin_from_anchor(inst, opts, ElementSet(inst.constraint.ground_size()), report);

  if (opts.random_restarts > 0) {
    std::mt19937_64 rng(opts.seed);
    std::uniform_real_distribution<double> dist(0.0, 1.0);
    for (int r = 0; r < opts.random_restarts; ++r) {
      std::vector<double> costs(inst.constraint.ground_size());
      for (double& v : costs) v = dist(rng);
      detail::mmin_from_anchor(inst, opts, inst.constraint.linear_minimize(costs), report);
    }
  }

  report.iterations = static_cast<int>(report.trace.size());
  double kappa = inst.objective.worst_curvature();
  report.factor_hint =
      inst.objective.size() *
      kappa_factor(std::max<double>(1.0, static_cast<double>(report.set.count())), kappa);
  return report;
}

/// Ellipsoidal-approximation reduction for unbounded l: swap each f_i for
/// sqrt(w_i(X)), drop the square roots (monotone), and solve the linear
/// min-max over {w_i}. Candidates from the individual strategies are ranked
/// by the curvature-mixed combined surrogate; the reported value is the true
/// objective.
inline SolveReport ea(const RobustInstance& inst, const EaOptions& opts = {}) {
  const Constraint& c = inst.constraint;
  std::vector<std::vector<double>> weights;
  std::vector<SetFunctionPtr> combined;
  for (const SetFunctionPtr& f : inst.objective.functions()) {
    EaSurrogate s = ea_surrogate(f, opts.provider);
    weights.push_back(s.weights);
    combined.push_back(s.combined);
  }
  AffineFamily fam = AffineFamily::from_weight_vectors(std::move(weights));

  std::vector<MinMaxStrategy> strategies =
      opts.strategies.empty() ? default_strategies(c) : opts.strategies;

  SolveReport report;
  report.algorithm = "ea";
  bool have = false;
  double best_rank = 0.0;
  for (MinMaxStrategy strategy : strategies) {
    MinMaxSolution sub = solve_robust_min(fam, c, {strategy}, opts.ga);
    double rank = combined.front()->eval(sub.set);
    for (std::size_t i = 1; i < combined.size(); ++i)
      rank = std::max(rank, combined[i]->eval(sub.set));
    report.trace.push_back({static_cast<int>(report.trace.size()), sub.value,
                            inst.objective.eval(sub.set)});
    report.inner_beta = sub.beta;
    if (!have || rank < best_rank) {
      best_rank = rank;
      report.set = sub.set;
      have = true;
    }
  }
  report.value = inst.objective.eval(report.set);
  report.iterations = static_cast<int>(report.trace.size());
  return report;
}

/// Average approximation: minimize f_avg = (1/l) sum f_i as a single
/// constrained submodular minimization (inner MMin or inner EA), then score
/// the winner under the true worst-case objective.
inline SolveReport solve_aa(const RobustInstance& inst, const AAOptions& opts = {}) {
  SetFunctionPtr favg = make_average(inst.objective.functions());
  RobustInstance single(RobustObjective({favg}), inst.constraint);

  SolveReport report;
  if (opts.inner == AAOptions::Inner::MMinSingle) {
    MMinOptions inner = opts.mmin;
    inner.strategies = opts.strategies;
    inner.ga = opts.ga;
    report = mmin(single, inner);
    report.algorithm = "mmin-aa";
  } else {
    EaOptions inner;
    inner.provider = opts.provider;
    inner.strategies = opts.strategies;
    inner.ga = opts.ga;
    report = ea(single, inner);
    report.algorithm = "ea-aa";
  }

  report.value = inst.objective.eval(report.set);
  double kappa = favg->curvature();
  report.factor_hint =
      inst.objective.size() *
      kappa_factor(std::max<double>(1.0, static_cast<double>(report.set.count())), kappa);
  return report;
}

/// Continuous relaxation: minimize max_i f_i^hat over the covering polytope
/// by projected subgradient descent (projection = cyclic most-violated
/// halfspace corrections plus box clipping), then chain-round the best
/// iterate.
inline SolveReport cr(const RobustInstance& inst, const CROptions& opts = {}) {
  const Constraint& c = inst.constraint;
  const int n = c.ground_size();
  CoveringFamily family = c.covering_family();

  SolveReport report;
  report.algorithm = "cr";

  auto project = [&](std::vector<double>& x) -> bool {
    for (double& v : x) v = std::clamp(v, 0.0, 1.0);
    for (int round = 0; round < opts.projection_rounds; ++round) {
      auto member = family.separate(x, opts.projection_tol);
      if (!member) return true;
      double mass = 0.0;
      for (auto i = member->support.find_first(); i != ElementSet::npos;
           i = member->support.find_next(i))
        mass += x[i];
      double deficit = (static_cast<double>(member->requirement) - mass) /
                       static_cast<double>(member->support.count());
      if (deficit <= 0.0) return true;
      for (auto i = member->support.find_first(); i != ElementSet::npos;
           i = member->support.find_next(i))
        x[i] = std::min(1.0, x[i] + deficit);
    }
    return false;
  };

  std::vector<double> x(n, 0.5);
  if (!project(x)) report.projection_converged = false;

  RobustLovaszResult cur = robust_lovasz(inst.objective, x);
  std::vector<double> best_x = x;
  double best_value = cur.value;
  double grad_norm0 = 0.0;
  for (double gq : cur.subgradient) grad_norm0 += gq * gq;
  grad_norm0 = std::sqrt(std::max(grad_norm0, 1e-18));

  // Polyak-style adaptive target gap
  double mu = std::max(0.5 * std::abs(best_value), 1e-3);
  int since_improvement = 0;
  int stale = 0;

  for (int t = 1; t <= opts.max_iterations; ++t) {
    double norm_sq = 0.0;
    for (double gq : cur.subgradient) norm_sq += gq * gq;
    norm_sq = std::max(norm_sq, 1e-18);

    double eta = 0.0;
    switch (opts.step_rule) {
      case CROptions::StepRule::SqrtT:
        eta = opts.step_scale / (grad_norm0 * std::sqrt(static_cast<double>(t)));
        break;
      case CROptions::StepRule::Fixed:
        eta = opts.step_scale;
        break;
      case CROptions::StepRule::Polyak: {
        double target = best_value - mu;
        eta = opts.step_scale * std::max(cur.value - target, 0.0) / norm_sq;
        break;
      }
    }

    for (int j = 0; j < n; ++j) x[j] -= eta * cur.subgradient[j];
    if (!project(x)) report.projection_converged = false;
    cur = robust_lovasz(inst.objective, x);
    report.iterations = t;

    double improvement = best_value - cur.value;
    if (cur.value < best_value) {
      best_value = cur.value;
      best_x = x;
    }
    if (improvement > opts.convergence_tol * std::max(1.0, std::abs(best_value))) {
      stale = 0;
    } else if (++stale >= opts.patience) {
      break;
    }
    if (opts.step_rule == CROptions::StepRule::Polyak) {
      if (improvement > 0.1 * mu) {
        since_improvement = 0;
      } else if (++since_improvement >= 10) {
        mu *= 0.5;
        since_improvement = 0;
        if (mu < 1e-12 * std::max(1.0, std::abs(best_value))) break;
      }
    }
  }

  ChainRounding rounding = round_chain_detailed(best_x, c);
  report.set = rounding.set;
  report.value = inst.objective.eval(report.set);
  report.continuous_value = best_value;
  report.factor_hint = family.rounding_factor();
  report.trace.push_back({report.iterations, best_value, report.value});
  return report;
}

struct SolveAllOptions {
  MMinOptions mmin;
  EaOptions ea;
  AAOptions aa_mmin;
  AAOptions aa_ea;
  CROptions cr;
  bool run_cr = true;
};

/// Runs MMin-AA, EA-AA, MMin, EA and CR, returns reports sorted ascending by
/// value (failed algorithms sink to the bottom, recorded, never fatal).
inline std::vector<SolveReport> solve_all(const RobustInstance& inst,
                                          SolveAllOptions opts = {}) {
  opts.aa_mmin.inner = AAOptions::Inner::MMinSingle;
  opts.aa_ea.inner = AAOptions::Inner::EaSingle;

  std::vector<SolveReport> reports;
  auto attempt = [&](const std::string& name, auto&& run) {
    try {
      reports.push_back(run());
    } catch (const std::exception& e) {
      SolveReport failed;
      failed.algorithm = name;
      failed.ok = false;
      failed.message = e.what();
      failed.value = std::numeric_limits<double>::infinity();
      failed.set = ElementSet(inst.constraint.ground_size());
      reports.push_back(std::move(failed));
    }
  };

  attempt("mmin-aa", [&] { return solve_aa(inst, opts.aa_mmin); });
  attempt("ea-aa", [&] { return solve_aa(inst, opts.aa_ea); });
  attempt("mmin", [&] { return mmin(inst, opts.mmin); });
  attempt("ea", [&] { return ea(inst, opts.ea); });
  if (opts.run_cr) attempt("cr", [&] { return cr(inst, opts.cr); });

  std::stable_sort(reports.begin(), reports.end(), [](const SolveReport& a, const SolveReport& b) {
    if (a.ok != b.ok) return a.ok;
    return a.value < b.value;
  });
  return reports;
}

}  // namespace rsm
