#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <cstdint>
#include <vector>

#include "rsm/constraint.hpp"
#include "rsm/oracle.hpp"
#include "rsm/robust_instance.hpp"
#include "test_util.hpp"

using namespace rsm;
using Catch::Approx;

namespace {

Graph triangle() { return Graph(3, {{0, 1}, {0, 2}, {1, 2}}); }

Graph path_sat() {
  // s=0, a=1, t=2; edges e0=(s,a), e1=(a,t)
  return Graph(3, {{0, 1}, {1, 2}}, 0, 2);
}

double cost_of(const std::vector<double>& costs, const ElementSet& s) {
  double acc = 0.0;
  for (auto i = s.find_first(); i != ElementSet::npos; i = s.find_next(i)) acc += costs[i];
  return acc;
}

/// Reference linear optimum by feasible-set enumeration.
double enumerated_min_cost(const Constraint& c, const std::vector<double>& costs) {
  double best = std::numeric_limits<double>::infinity();
  enumerate_feasible(c, EnumerationBudget{}, [&](const ElementSet& s) {
    best = std::min(best, cost_of(costs, s));
  });
  return best;
}

/// Reference closure membership: does any subset of s pass is_feasible?
bool enumerated_contains_feasible(const Constraint& c, const ElementSet& s) {
  auto ids = set_to_indices(s);
  const std::uint64_t limit = std::uint64_t{1} << ids.size();
  for (std::uint64_t mask = 0; mask < limit; ++mask) {
    ElementSet sub(c.ground_size());
    for (std::size_t i = 0; i < ids.size(); ++i)
      if (mask >> i & 1u) sub.set(ids[i]);
    if (c.is_feasible(sub)) return true;
  }
  return false;
}

std::vector<Constraint> small_zoo() {
  std::vector<Constraint> zoo;
  zoo.push_back(Constraint::cardinality_at_least(6, 2));
  zoo.push_back(Constraint::spanning_tree(Graph::complete(4)));
  zoo.push_back(Constraint::perfect_bipartite_matching(Graph::complete_bipartite(3)));
  zoo.push_back(Constraint::st_path(Graph(5,
      {{0, 1}, {0, 2}, {1, 2}, {1, 3}, {2, 3}, {2, 4}, {3, 4}}, 0, 4)));
  zoo.push_back(Constraint::st_cut(Graph(5,
      {{0, 1}, {0, 2}, {1, 2}, {1, 3}, {2, 3}, {2, 4}, {3, 4}}, 0, 4)));
  zoo.push_back(Constraint::vertex_cover(Graph(5, {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {0, 4}})));
  zoo.push_back(Constraint::edge_cover(Graph(4, {{0, 1}, {1, 2}, {2, 3}, {0, 3}, {0, 2}})));
  zoo.push_back(Constraint::set_cover(4, {make_set(4, {0, 1}), make_set(4, {1, 2}),
                                          make_set(4, {2, 3}), make_set(4, {0, 3}),
                                          make_set(4, {1, 3})}));
  return zoo;
}

}  // namespace

TEST_CASE("constraint construction validates feasibility") {
  CHECK_THROWS_AS(Constraint::cardinality_at_least(3, 4), std::invalid_argument);
  CHECK_THROWS_AS(Constraint::spanning_tree(Graph(4, {{0, 1}, {2, 3}})), std::invalid_argument);
  CHECK_THROWS_AS(Constraint::st_path(Graph(4, {{0, 1}, {2, 3}}, 0, 3)), std::invalid_argument);
  // 2x1 bipartition cannot host a perfect matching
  CHECK_THROWS_AS(
      Constraint::perfect_bipartite_matching(Graph(3, {{0, 2}, {1, 2}}, {}, {}, 2)),
      std::invalid_argument);
  // isolated vertex defeats an edge cover
  CHECK_THROWS_AS(Constraint::edge_cover(Graph(3, {{0, 1}})), std::invalid_argument);
  CHECK_THROWS_AS(Constraint::set_cover(3, {make_set(3, {0, 1})}), std::invalid_argument);
}

TEST_CASE("linear minimization hand examples") {
  SECTION("cardinality picks the k cheapest") {
    auto c = Constraint::cardinality_at_least(3, 2);
    CHECK(c.linear_minimize({3.0, 1.0, 2.0}) == make_set(3, {1, 2}));
    CHECK_THROWS_AS(c.linear_minimize({1.0, -0.1, 0.0}), std::invalid_argument);
  }

  SECTION("3x3 matching with identity-favoring costs") {
    auto c = Constraint::perfect_bipartite_matching(Graph::complete_bipartite(3));
    std::vector<double> costs(9, 2.0);
    costs[0 * 3 + 0] = costs[1 * 3 + 1] = costs[2 * 3 + 2] = 0.5;
    ElementSet sol = c.linear_minimize(costs);
    CHECK(sol == make_set(9, {0, 4, 8}));
    CHECK(cost_of(costs, sol) == Approx(enumerated_min_cost(c, costs)));
  }

  SECTION("triangle spanning tree") {
    auto c = Constraint::spanning_tree(triangle());
    ElementSet sol = c.linear_minimize({1.0, 2.0, 3.0});
    CHECK(sol == make_set(3, {0, 1}));
    CHECK(cost_of({1.0, 2.0, 3.0}, sol) == Approx(3.0));
  }
}

TEST_CASE("linear minimization matches enumeration on random costs") {
  auto g = rsmtest::rng(101);
  for (const Constraint& c : small_zoo()) {
    for (int trial = 0; trial < 20; ++trial) {
      auto costs = rsmtest::random_weights(g, c.ground_size(), 0.0, 1.0);
      ElementSet sol = c.linear_minimize(costs);
      REQUIRE(c.is_feasible(sol));
      CHECK(cost_of(costs, sol) == Approx(enumerated_min_cost(c, costs)).margin(1e-5));
    }
  }
}

TEST_CASE("restricted linear minimization stays inside the allowed set") {
  auto g = rsmtest::rng(103);
  for (const Constraint& c : small_zoo()) {
    for (int trial = 0; trial < 10; ++trial) {
      auto costs = rsmtest::random_weights(g, c.ground_size(), 0.0, 1.0);
      ElementSet allowed = rsmtest::random_subset(g, c.ground_size(), 0.8);
      if (!c.contains_feasible(allowed)) continue;
      ElementSet sol = c.linear_minimize_within(costs, allowed);
      CHECK(sol.is_subset_of(allowed));
      CHECK(c.is_feasible(sol));
    }
  }
}

TEST_CASE("is_feasible hand examples") {
  CHECK_FALSE(Constraint::cardinality_at_least(3, 2).is_feasible(make_set(3, {0})));

  auto path = Constraint::st_path(path_sat());
  CHECK(path.is_feasible(make_set(2, {0, 1})));
  CHECK_FALSE(path.is_feasible(make_set(2, {0})));

  auto match = Constraint::perfect_bipartite_matching(Graph::complete_bipartite(2));
  CHECK_FALSE(match.is_feasible(make_set(4, {0})));
  CHECK(match.is_feasible(make_set(4, {0, 3})));
  CHECK_FALSE(match.is_feasible(make_set(4, {0, 1})));
}

TEST_CASE("contains_feasible hand examples") {
  auto tree = Constraint::spanning_tree(triangle());
  CHECK(tree.contains_feasible(full_set(3)));
  CHECK_FALSE(tree.is_feasible(full_set(3)));

  Graph g(4, {{0, 1}, {0, 2}, {1, 3}, {2, 3}, {1, 2}}, 0, 3);
  auto cut = Constraint::st_cut(g);
  ElementSet incident_s = make_set(5, {0, 1});
  CHECK(cut.contains_feasible(incident_s));
  CHECK(cut.is_feasible(incident_s));
}

TEST_CASE("contains_feasible agrees with exhaustive subset search") {
  auto g = rsmtest::rng(107);
  for (const Constraint& c : small_zoo()) {
    for (int trial = 0; trial < 60; ++trial) {
      ElementSet s = rsmtest::random_subset(g, c.ground_size(), 0.55);
      CHECK(c.contains_feasible(s) == enumerated_contains_feasible(c, s));
    }
    // feasibility implies closure membership
    enumerate_feasible(c, EnumerationBudget{}, [&](const ElementSet& s) {
      REQUIRE(c.contains_feasible(s));
    });
  }
}

TEST_CASE("covering families, explicit cases") {
  SECTION("cardinality") {
    auto fam = Constraint::cardinality_at_least(6, 2).covering_family();
    REQUIRE(fam.is_explicit());
    REQUIRE(fam.members().size() == 1);
    CHECK(fam.members()[0].support == full_set(6));
    CHECK(fam.members()[0].requirement == 2);
    CHECK(fam.rounding_factor() == Approx(5.0));  // n - k + 1
  }

  SECTION("vertex cover of a single edge") {
    auto fam = Constraint::vertex_cover(Graph(2, {{0, 1}})).covering_family();
    REQUIRE(fam.is_explicit());
    REQUIRE(fam.members().size() == 1);
    CHECK(fam.members()[0].support == full_set(2));
    CHECK(fam.members()[0].requirement == 1);
    CHECK(fam.rounding_factor() == Approx(2.0));
  }

  SECTION("matching degree constraints") {
    auto fam = Constraint::perfect_bipartite_matching(Graph::complete_bipartite(3))
                   .covering_family();
    REQUIRE(fam.is_explicit());
    CHECK(fam.members().size() == 6);
    for (const auto& m : fam.members()) {
      CHECK(m.requirement == 1);
      CHECK(m.support.count() == 3);
    }
  }
}

TEST_CASE("separation oracles") {
  SECTION("st path separation at zero returns a violated cut") {
    auto fam = Constraint::st_path(path_sat()).covering_family();
    std::vector<double> zero(2, 0.0);
    auto member = fam.separate(zero);
    REQUIRE(member.has_value());
    CHECK(member->requirement == 1);
    // the member is a genuine s-t cut with violation 1
    CHECK(removal_disconnects_st(path_sat(), member->support));
    double mass = 0.0;
    for (auto e = member->support.find_first(); e != ElementSet::npos;
         e = member->support.find_next(e))
      mass += zero[e];
    CHECK(member->requirement - mass == Approx(1.0));
  }

  SECTION("st cut separation at zero returns the two-edge path") {
    auto fam = Constraint::st_cut(path_sat()).covering_family();
    std::vector<double> zero(2, 0.0);
    auto member = fam.separate(zero);
    REQUIRE(member.has_value());
    CHECK(member->support == full_set(2));
    CHECK(member->requirement == 1);
  }

  SECTION("all-ones point satisfies every supported family") {
    for (const Constraint& c : small_zoo()) {
      auto fam = c.covering_family();
      std::vector<double> ones(c.ground_size(), 1.0);
      CHECK_FALSE(fam.separate(ones).has_value());
    }
  }

  SECTION("explicit separation matches an exhaustive scan") {
    auto g = rsmtest::rng(109);
    auto c = Constraint::set_cover(5, {make_set(5, {0, 1, 2}), make_set(5, {2, 3}),
                                       make_set(5, {3, 4}), make_set(5, {0, 4})});
    auto fam = c.covering_family();
    for (int trial = 0; trial < 50; ++trial) {
      auto x = rsmtest::random_point(g, c.ground_size());
      double worst = 0.0;
      for (const auto& m : fam.members()) {
        double mass = 0.0;
        for (auto e = m.support.find_first(); e != ElementSet::npos; e = m.support.find_next(e))
          mass += x[e];
        worst = std::max(worst, m.requirement - mass);
      }
      auto member = fam.separate(x);
      if (worst <= CoveringFamily::kDefaultTol) {
        CHECK_FALSE(member.has_value());
      } else {
        REQUIRE(member.has_value());
        double mass = 0.0;
        for (auto e = member->support.find_first(); e != ElementSet::npos;
             e = member->support.find_next(e))
          mass += x[e];
        CHECK(member->requirement - mass == Approx(worst));
      }
    }
  }
}

TEST_CASE("indicator closure agreement between polytope and contains_feasible") {
  // exact for cardinality, covers, paths, cuts and trees (matching families
  // are a strict relaxation of the closure and are excluded here)
  for (const Constraint& c : small_zoo()) {
    if (c.kind() == ConstraintKind::PerfectBipartiteMatching) continue;
    auto fam = c.covering_family();
    rsmtest::for_each_subset(c.ground_size(), [&](const ElementSet& s) {
      std::vector<double> x(c.ground_size(), 0.0);
      for (auto i = s.find_first(); i != ElementSet::npos; i = s.find_next(i)) x[i] = 1.0;
      bool satisfied = !fam.separate(x).has_value();
      CHECK(satisfied == c.contains_feasible(s));
    });
  }
}

TEST_CASE("feasible enumeration counts") {
  EnumerationBudget budget;

  auto match3 = Constraint::perfect_bipartite_matching(Graph::complete_bipartite(3));
  int count = 0;
  enumerate_feasible(match3, budget, [&](const ElementSet&) { ++count; });
  CHECK(count == 6);

  auto match4 = Constraint::perfect_bipartite_matching(Graph::complete_bipartite(4));
  count = 0;
  enumerate_feasible(match4, budget, [&](const ElementSet&) { ++count; });
  CHECK(count == 24);

  count = 0;
  enumerate_feasible(Constraint::spanning_tree(triangle()), budget,
                     [&](const ElementSet&) { ++count; });
  CHECK(count == 3);

  // Cayley: n^(n-2) spanning trees of K_n
  count = 0;
  enumerate_feasible(Constraint::spanning_tree(Graph::complete(4)), budget,
                     [&](const ElementSet&) { ++count; });
  CHECK(count == 16);
  count = 0;
  enumerate_feasible(Constraint::spanning_tree(Graph::complete(5)), budget,
                     [&](const ElementSet&) { ++count; });
  CHECK(count == 125);

  count = 0;
  enumerate_feasible(Constraint::cardinality_at_least(4, 2), budget,
                     [&](const ElementSet&) { ++count; });
  CHECK(count == 11);  // C(4,2) + C(4,3) + C(4,4)
}

TEST_CASE("enumeration budget is enforced") {
  auto c = Constraint::cardinality_at_least(20, 1);
  EnumerationBudget budget;
  CHECK_THROWS_AS(enumerate_feasible(c, budget, [](const ElementSet&) {}), BudgetExceeded);
  budget.max_ground_size = 20;
  budget.max_feasible_sets = 100;
  CHECK_THROWS_AS(enumerate_feasible(c, budget, [](const ElementSet&) {}), BudgetExceeded);
}

TEST_CASE("brute force oracle") {
  SECTION("single modular function agrees with linear minimization") {
    auto g = rsmtest::rng(127);
    auto c = Constraint::cardinality_at_least(8, 3);
    auto w = rsmtest::random_weights(g, 8);
    RobustInstance inst(RobustObjective({std::make_shared<ModularFunction>(w)}), c);
    auto [set, value] = brute_force_min(inst);
    CHECK(value == Approx(cost_of(w, c.linear_minimize(w))));
  }

  SECTION("ties resolve to the lexicographically smallest set") {
    auto f1 = std::make_shared<ModularFunction>(std::vector<double>{1.0, 0.0});
    auto f2 = std::make_shared<ModularFunction>(std::vector<double>{0.0, 1.0});
    RobustInstance inst(RobustObjective({f1, f2}), Constraint::cardinality_at_least(2, 1));
    auto [set, value] = brute_force_min(inst);
    CHECK(value == Approx(1.0));
    CHECK(set == make_set(2, {0}));
  }

  SECTION("oracle value lower-bounds any feasible set") {
    auto g = rsmtest::rng(131);
    auto c = Constraint::spanning_tree(Graph::complete(4));
    std::vector<SetFunctionPtr> fs;
    for (int i = 0; i < 3; ++i) fs.push_back(rsmtest::random_com(g, 6, 2));
    RobustInstance inst(RobustObjective(fs), c);
    auto [set, value] = brute_force_min(inst);
    enumerate_feasible(c, EnumerationBudget{}, [&](const ElementSet& s) {
      CHECK(inst.objective.eval(s) >= value - 1e-12);
    });
  }
}

TEST_CASE("greedy cover beta reporting") {
  // small families are solved exactly (beta = 1)
  auto c = Constraint::set_cover(4, {make_set(4, {0, 1}), make_set(4, {1, 2}),
                                     make_set(4, {2, 3}), make_set(4, {0, 3})});
  CHECK(c.linear_solver_beta() == Approx(1.0));

  // 24 singleton-ish sets force the greedy path
  std::vector<ElementSet> sets;
  for (int i = 0; i < 24; ++i) {
    ElementSet s(6);
    s.set(i % 6);
    if (i % 5 == 0) s.set((i + 1) % 6);
    sets.push_back(s);
  }
  auto big = Constraint::set_cover(6, sets);
  CHECK(big.linear_solver_beta() > 1.0);
  auto sol = big.linear_minimize(std::vector<double>(24, 1.0));
  CHECK(big.is_feasible(sol));
}
