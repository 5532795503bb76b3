#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <memory>
#include <vector>

#include "rsm/lovasz.hpp"
#include "rsm/modular_bounds.hpp"
#include "rsm/set_function.hpp"
#include "test_util.hpp"

using namespace rsm;
using Catch::Approx;

namespace {

std::shared_ptr<const SqrtModular> sqrt_cardinality(int n) {
  return std::make_shared<SqrtModular>(std::vector<double>(n, 1.0));
}

}  // namespace

TEST_CASE("modular evaluation") {
  ModularFunction f({1.0, 2.0, 3.0});
  CHECK(f.eval(make_set(3, {0, 2})) == Approx(4.0));
  CHECK(f.eval(empty_set(3)) == Approx(0.0));
  ModularFunction g({1.0, 2.0}, 0.5);
  CHECK(g.eval(empty_set(2)) == Approx(0.5));
  CHECK(g.eval(full_set(2)) == Approx(3.5));
  CHECK_THROWS_AS(ModularFunction({1.0, -0.5}), std::invalid_argument);
}

TEST_CASE("concave-over-modular evaluation") {
  std::vector<ElementSet> clusters = {make_set(3, {0, 1}), make_set(3, {2})};
  ConcaveOverModular f(clusters, {1.0, 1.0, 4.0}, 0.5);
  CHECK(f.eval(make_set(3, {0, 1, 2})) == Approx(std::sqrt(2.0) + 2.0));
  CHECK(f.eval(empty_set(3)) == Approx(0.0));
  CHECK(f.eval(make_set(3, {1})) == Approx(1.0));
}

TEST_CASE("eval rejects shape mismatch") {
  ModularFunction f({1.0, 2.0, 3.0});
  CHECK_THROWS_AS(f.eval(empty_set(4)), std::invalid_argument);
}

TEST_CASE("gain basics") {
  ModularFunction f({1.0, 2.0});
  CHECK(f.gain(1, empty_set(2)) == Approx(2.0));
  CHECK_THROWS_AS(f.gain(1, make_set(2, {1})), std::invalid_argument);

  auto s4 = sqrt_cardinality(4);
  ElementSet rest = full_set(4);
  rest.reset(2);
  CHECK(s4->gain(2, rest) == Approx(2.0 - std::sqrt(3.0)));
}

TEST_CASE("diminishing returns on random concave-over-modular") {
  auto g = rsmtest::rng(7);
  for (int trial = 0; trial < 5; ++trial) {
    auto f = rsmtest::random_com(g, 6, 3);
    rsmtest::for_each_subset(6, [&](const ElementSet& s) {
      rsmtest::for_each_subset(6, [&](const ElementSet& t) {
        if (!s.is_subset_of(t)) return;
        for (int j = 0; j < 6; ++j) {
          if (t.test(j)) continue;
          CHECK(f->gain(j, s) >= f->gain(j, t) - 1e-12);
        }
      });
    });
  }
}

TEST_CASE("submodularity and monotonicity across variants") {
  auto g = rsmtest::rng(11);
  std::vector<SetFunctionPtr> funcs;
  funcs.push_back(rsmtest::random_com(g, 7, 3));
  funcs.push_back(std::make_shared<SqrtModular>(rsmtest::random_weights(g, 7, 0.1, 1.0)));
  funcs.push_back(std::make_shared<ModularFunction>(rsmtest::random_weights(g, 7, 0.0, 1.0)));
  funcs.push_back(make_average({funcs[0], funcs[1]}));

  for (const auto& f : funcs) {
    rsmtest::for_each_subset(7, [&](const ElementSet& s) {
      rsmtest::for_each_subset(7, [&](const ElementSet& t) {
        double lhs = f->eval(s) + f->eval(t);
        double rhs = f->eval(s | t) + f->eval(s & t);
        CHECK(lhs >= rhs - 1e-9);
      });
      for (int j = 0; j < 7; ++j)
        if (!s.test(j)) CHECK(f->gain(j, s) >= -1e-12);
    });
  }
}

TEST_CASE("sampled submodularity above exhaustive range") {
  auto g = rsmtest::rng(13);
  auto f = rsmtest::random_com(g, 12, 4);
  for (int i = 0; i < 1000; ++i) {
    ElementSet s = rsmtest::random_subset(g, 12);
    ElementSet t = rsmtest::random_subset(g, 12);
    CHECK(f->eval(s) + f->eval(t) >= f->eval(s | t) + f->eval(s & t) - 1e-9);
  }
}

TEST_CASE("curvature") {
  CHECK(ModularFunction({3.0, 1.0, 2.0}).curvature() == Approx(0.0));
  CHECK(ModularFunction({3.0, 1.0}, 2.0).curvature() == Approx(0.0));

  auto s4 = sqrt_cardinality(4);
  CHECK(s4->curvature() == Approx(std::sqrt(3.0) - 1.0));

  // an element whose gain vanishes at V-j drives the ratio to zero
  rsmtest::CappedCardinality capped(4, 2);
  auto info = capped.curvature_info();
  CHECK(info.kappa == Approx(1.0));
  CHECK_FALSE(info.degenerate);

  // zero singleton value flags the degenerate case and reports kappa = 1
  SqrtModular with_zero({1.0, 0.0});
  auto degenerate = with_zero.curvature_info();
  CHECK(degenerate.kappa == Approx(1.0));
  CHECK(degenerate.degenerate);
}

TEST_CASE("kappa_factor") {
  CHECK(kappa_factor(5.0, 1.0) == Approx(5.0));
  CHECK(kappa_factor(5.0, 0.0) == Approx(1.0));
  CHECK(kappa_factor(2.0, 0.5) == Approx(4.0 / 3.0));
  CHECK_THROWS_AS(kappa_factor(0.5, 0.5), std::invalid_argument);

  // nondecreasing in both arguments
  double prev_v = 0.0;
  for (double v = 1.0; v <= 16.0; v += 0.5) {
    double cur = kappa_factor(v, 0.7);
    CHECK(cur >= prev_v - 1e-12);
    prev_v = cur;
  }
  double prev_k = 0.0;
  for (double k = 0.0; k <= 1.0; k += 0.05) {
    double cur = kappa_factor(7.0, k);
    CHECK(cur >= prev_k - 1e-12);
    prev_k = cur;
  }
}

TEST_CASE("lovasz extension agrees with f on indicators") {
  auto g = rsmtest::rng(17);
  auto f = rsmtest::random_com(g, 8, 3);
  rsmtest::for_each_subset(8, [&](const ElementSet& a) {
    std::vector<double> x(8, 0.0);
    for (auto i = a.find_first(); i != ElementSet::npos; i = a.find_next(i)) x[i] = 1.0;
    CHECK(lovasz(*f, x).value == Approx(f->eval(a)).margin(1e-12));
  });
}

TEST_CASE("lovasz hand example") {
  auto f = sqrt_cardinality(2);
  auto r = lovasz(*f, {0.5, 1.0});
  CHECK(r.value == Approx(1.0 + 0.5 * (std::sqrt(2.0) - 1.0)));
  CHECK(r.subgradient[1] == Approx(1.0));
  CHECK(r.subgradient[0] == Approx(std::sqrt(2.0) - 1.0));
}

TEST_CASE("lovasz properties on random draws") {
  auto g = rsmtest::rng(19);
  auto f = rsmtest::random_com(g, 9, 4);
  std::uniform_real_distribution<double> lam(0.0, 3.0);
  for (int i = 0; i < 100; ++i) {
    auto x = rsmtest::random_point(g, 9);
    auto y = rsmtest::random_point(g, 9);

    // positive homogeneity
    double l = lam(g);
    std::vector<double> lx(x);
    for (double& v : lx) v *= l;
    CHECK(lovasz(*f, lx).value == Approx(l * lovasz(*f, x).value).margin(1e-9));

    // midpoint convexity
    std::vector<double> mid(9);
    for (int j = 0; j < 9; ++j) mid[j] = 0.5 * (x[j] + y[j]);
    CHECK(lovasz(*f, mid).value <=
          0.5 * (lovasz(*f, x).value + lovasz(*f, y).value) + 1e-9);

    // subgradient inequality
    auto rx = lovasz(*f, x);
    double lin = rx.value;
    for (int j = 0; j < 9; ++j) lin += rx.subgradient[j] * (y[j] - x[j]);
    CHECK(lovasz(*f, y).value >= lin - 1e-9);
  }
}

TEST_CASE("lovasz descending order breaks ties by index") {
  auto order = descending_order({0.5, 0.7, 0.5, 0.9});
  CHECK(order == std::vector<int>{3, 1, 0, 2});
}

TEST_CASE("modular lower bound") {
  SECTION("modular function reproduces itself") {
    ModularFunction f({2.0, 1.0, 4.0}, 0.5);
    auto b = modular_lower_bound(f, make_set(3, {1}));
    CHECK(b.kind == BoundKind::LowerSubgradient);
    rsmtest::for_each_subset(3, [&](const ElementSet& z) {
      CHECK(b.eval(z) == Approx(f.eval(z)).margin(1e-12));
    });
  }

  SECTION("sqrt cardinality chain weights") {
    auto f = sqrt_cardinality(4);
    auto b = modular_lower_bound(*f, full_set(4));
    for (int i = 0; i < 4; ++i)
      CHECK(b.surrogate.weights()[i] ==
            Approx(std::sqrt(i + 1.0) - std::sqrt(static_cast<double>(i))));
  }

  SECTION("exhaustive minorization and anchor tightness") {
    auto g = rsmtest::rng(23);
    for (int trial = 0; trial < 10; ++trial) {
      auto f = rsmtest::random_com(g, 8, 3);
      ElementSet y = rsmtest::random_subset(g, 8);
      auto b = modular_lower_bound(*f, y);
      CHECK(b.eval(y) == Approx(f->eval(y)).margin(1e-9));
      rsmtest::for_each_subset(8, [&](const ElementSet& z) {
        CHECK(b.eval(z) <= f->eval(z) + 1e-9);
      });
    }
  }
}

TEST_CASE("modular upper bounds") {
  SECTION("empty anchor collapses both variants") {
    auto g = rsmtest::rng(29);
    auto f = rsmtest::random_com(g, 6, 2);
    auto b1 = modular_upper_bound(*f, empty_set(6), 1);
    auto b2 = modular_upper_bound(*f, empty_set(6), 2);
    CHECK(b1.kind == BoundKind::UpperEmpty);
    CHECK(b2.kind == BoundKind::UpperEmpty);
    CHECK(b1.surrogate.constant() == Approx(0.0).margin(1e-12));
    for (int j = 0; j < 6; ++j) {
      CHECK(b1.surrogate.weights()[j] == Approx(f->singleton_gain(j)));
      CHECK(b2.surrogate.weights()[j] == Approx(f->singleton_gain(j)));
    }
  }

  SECTION("modular function is its own upper bound") {
    ModularFunction f({2.0, 3.0, 1.0}, 1.0);
    for (int variant : {1, 2}) {
      auto b = modular_upper_bound(f, make_set(3, {0, 2}), variant);
      rsmtest::for_each_subset(3, [&](const ElementSet& z) {
        CHECK(b.eval(z) == Approx(f.eval(z)).margin(1e-12));
      });
    }
  }

  SECTION("exhaustive dominance and anchor tightness") {
    auto g = rsmtest::rng(31);
    for (int trial = 0; trial < 10; ++trial) {
      auto f = rsmtest::random_com(g, 8, 3);
      ElementSet x = rsmtest::random_subset(g, 8);
      for (int variant : {1, 2}) {
        auto b = modular_upper_bound(*f, x, variant);
        CHECK(b.eval(x) == Approx(f->eval(x)).margin(1e-9));
        rsmtest::for_each_subset(8, [&](const ElementSet& z) {
          CHECK(b.eval(z) >= f->eval(z) - 1e-9);
        });
      }
    }
  }
}

TEST_CASE("empty-anchor bound obeys the curvature factor") {
  // m_0(X) <= K(|X|, kappa_f) f(X) for all X
  auto g = rsmtest::rng(37);
  std::vector<SetFunctionPtr> funcs;
  funcs.push_back(rsmtest::random_com(g, 10, 3));
  funcs.push_back(std::make_shared<SqrtModular>(rsmtest::random_weights(g, 10, 0.1, 1.0)));
  for (const auto& f : funcs) {
    const double kappa = f->curvature();
    auto b = modular_upper_bound(*f, empty_set(10), 1);
    rsmtest::for_each_subset(10, [&](const ElementSet& x) {
      if (x.none()) return;
      double cap = kappa_factor(static_cast<double>(x.count()), kappa) * f->eval(x);
      CHECK(b.eval(x) <= cap + 1e-9);
      CHECK(b.eval(x) >= f->eval(x) - 1e-9);
    });
  }
}

TEST_CASE("curve normalization") {
  SECTION("modular input is rejected") {
    auto f = std::make_shared<ModularFunction>(std::vector<double>{1.0, 2.0});
    CHECK_THROWS_AS(curve_normalized(f), std::domain_error);
  }

  SECTION("fully curved input returns itself") {
    auto f = std::make_shared<rsmtest::CappedCardinality>(4, 2);
    REQUIRE(f->curvature() == Approx(1.0));
    auto fk = curve_normalized(std::static_pointer_cast<const SetFunction>(f));
    rsmtest::for_each_subset(4, [&](const ElementSet& x) {
      CHECK(fk->eval(x) == Approx(f->eval(x)).margin(1e-12));
    });
  }

  SECTION("strips the modular mixture off a sqrt blend") {
    // 0.5 (sqrt(|X|) + |X|) normalizes to exactly the normalized sqrt(|X|)
    std::vector<ScaledSum::Term> terms;
    terms.emplace_back(0.5, sqrt_cardinality(4));
    terms.emplace_back(0.5, std::make_shared<ModularFunction>(std::vector<double>(4, 1.0)));
    auto blend = std::make_shared<ScaledSum>(std::move(terms));
    auto blend_norm = curve_normalized(std::static_pointer_cast<const SetFunction>(blend));
    auto sqrt_norm = curve_normalized(std::static_pointer_cast<const SetFunction>(sqrt_cardinality(4)));
    rsmtest::for_each_subset(4, [&](const ElementSet& x) {
      CHECK(blend_norm->eval(x) == Approx(sqrt_norm->eval(x)).margin(1e-9));
    });

    // and the result stays monotone submodular
    rsmtest::for_each_subset(4, [&](const ElementSet& s) {
      for (int j = 0; j < 4; ++j)
        if (!s.test(j)) CHECK(blend_norm->gain(j, s) >= -1e-9);
      rsmtest::for_each_subset(4, [&](const ElementSet& t) {
        CHECK(blend_norm->eval(s) + blend_norm->eval(t) >=
              blend_norm->eval(s | t) + blend_norm->eval(s & t) - 1e-9);
      });
    });
  }
}

TEST_CASE("ea surrogate") {
  SECTION("exact sqrt is idempotent") {
    auto f = std::make_shared<SqrtModular>(std::vector<double>{0.5, 2.0, 1.0});
    auto ea = ea_surrogate(f, EaProvider::exact_sqrt());
    CHECK(ea.weights == f->weights());
    rsmtest::for_each_subset(3, [&](const ElementSet& x) {
      CHECK(ea.lower->eval(x) == Approx(f->eval(x)).margin(1e-12));
      CHECK(ea.combined->eval(x) == Approx(f->eval(x)).margin(1e-12));
    });
  }

  SECTION("exact sqrt rejects other shapes") {
    auto g = rsmtest::rng(41);
    SetFunctionPtr f = rsmtest::random_com(g, 5, 2);
    CHECK_THROWS_AS(ea_surrogate(f, EaProvider::exact_sqrt()), std::invalid_argument);
  }

  SECTION("gain-squared sandwich, exhaustive") {
    auto g = rsmtest::rng(43);
    for (int trial = 0; trial < 5; ++trial) {
      SetFunctionPtr f = rsmtest::random_com(g, 8, 3);
      auto ea = ea_surrogate(f, EaProvider::gain_squared());
      rsmtest::for_each_subset(8, [&](const ElementSet& x) {
        double gain_sum = 0.0;
        for (auto i = x.find_first(); i != ElementSet::npos; i = x.find_next(i))
          gain_sum += f->top_gain(i);
        CHECK(ea.lower->eval(x) <= gain_sum + 1e-9);
        CHECK(gain_sum <= f->eval(x) + 1e-9);
        CHECK(ea.combined->eval(x) <= f->eval(x) + 1e-9);
      });
    }
  }

  SECTION("all-zero user weights give the trivial lower bound") {
    auto g = rsmtest::rng(47);
    SetFunctionPtr f = rsmtest::random_com(g, 6, 2);
    auto ea = ea_surrogate(f, EaProvider::user(std::vector<double>(6, 0.0)));
    rsmtest::for_each_subset(6, [&](const ElementSet& x) {
      CHECK(ea.lower->eval(x) == Approx(0.0).margin(1e-12));
      CHECK(ea.lower->eval(x) <= f->eval(x) + 1e-12);
    });
  }
}

TEST_CASE("robust objective worst index breaks ties low") {
  auto a = std::make_shared<ModularFunction>(std::vector<double>{1.0, 0.0});
  auto b = std::make_shared<ModularFunction>(std::vector<double>{1.0, 2.0});
  RobustObjective obj({a, b});
  auto [v0, i0] = obj.eval_worst(make_set(2, {0}));
  CHECK(v0 == Approx(1.0));
  CHECK(i0 == 0);
  auto [v1, i1] = obj.eval_worst(make_set(2, {1}));
  CHECK(v1 == Approx(2.0));
  CHECK(i1 == 1);
}

TEST_CASE("scaled sum averages") {
  auto g = rsmtest::rng(53);
  auto f1 = rsmtest::random_com(g, 5, 2);
  auto f2 = rsmtest::random_com(g, 5, 2);
  auto avg = make_average({f1, f2});
  rsmtest::for_each_subset(5, [&](const ElementSet& x) {
    CHECK(avg->eval(x) == Approx(0.5 * (f1->eval(x) + f2->eval(x))).margin(1e-12));
  });
}
