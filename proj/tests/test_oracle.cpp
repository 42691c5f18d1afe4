#include <random>

#include "doctest.h"
#include "support.hpp"
#include "vmdp/error.hpp"
#include "vmdp/pareto.hpp"
#include "vmdp/report.hpp"

using namespace vmdp;

TEST_CASE("oracle on the design example") {
  const Model m = support::design_example();
  const OracleResult o = brute_force_oracle(m);
  CHECK(o.policies_evaluated == 625);
  CHECK(o.vertices.size() == 625);
  for (const auto& e : o.vertices) CHECK(e.equivalent_policies == 1);
  const auto eff = o.efficient();
  REQUIRE(eff.size() == 10);
  std::set<ActionMap> expected;
  for (const auto& row : support::design_efficient_set()) expected.insert(support::design_map(m.layout(), row.pi1, row.pi2));
  for (const auto* e : eff) CHECK(expected.count(e->actions) == 1);
}

TEST_CASE("pairwise dominance is weaker than hull dominance") {
  // One state, one decision: values (1, 0), (0, 1.2) and (0.5, 0.5). The last
  // is dominated by neither other policy but by their even mixture (0.5, 0.6).
  Model m(1, 2, 2, {3});
  const double rewards[3][2] = {{1.0, 0.0}, {0.0, 1.2}, {0.5, 0.5}};
  for (int a = 0; a < 3; ++a) {
    m.transition(0, 0, a, 0) = 1.0;
    m.reward(0, 0, a)[0] = rewards[a][0];
    m.reward(0, 0, a)[1] = rewards[a][1];
  }
  const OracleResult o = brute_force_oracle(m);
  REQUIRE(o.vertices.size() == 3);
  CHECK(o.vertices[0].efficient);
  CHECK(o.vertices[1].efficient);
  CHECK_FALSE(o.vertices[2].efficient);
  CHECK_FALSE(support::weakly_dominates(o.vertices[0].value, o.vertices[2].value, 0.0));
  CHECK_FALSE(support::weakly_dominates(o.vertices[1].value, o.vertices[2].value, 0.0));

  const auto walk = enumerate_efficient(CanonicalProgram(m));
  CHECK(walk.efficient.size() == 2);
}

TEST_CASE("single objective oracle returns the argmax set") {
  std::mt19937_64 rng(2);
  for (int i = 0; i < 10; ++i) {
    const Model m = random_model(2, 3, {2, 2}, 1, 0.0, rng);
    const OracleResult o = brute_force_oracle(m);
    double best = -INFINITY;
    for (const auto& e : o.vertices) best = std::max(best, e.value[0]);
    for (const auto& e : o.vertices) CHECK(e.efficient == (e.value[0] >= best - 1e-9));
  }
}

TEST_CASE("equivalence classes on a non-regular model") {
  std::mt19937_64 rng(3);
  const Model m = support::unreachable_model(rng, 1);
  const OracleResult o = brute_force_oracle(m);
  std::size_t total = 0;
  for (const auto& e : o.vertices) total += e.equivalent_policies;
  CHECK(total == o.policies_evaluated);
  CHECK(o.vertices.size() < o.policies_evaluated);
  // state 1 at epoch 1 is unreachable, so its two choices collapse
  CHECK(o.vertices.size() * 2 == o.policies_evaluated);
  for (std::size_t a = 0; a < o.vertices.size(); ++a)
    for (std::size_t b = a + 1; b < o.vertices.size(); ++b) CHECK_FALSE(same_vertex(o.vertices[a].x, o.vertices[b].x));
}

TEST_CASE("oracle agrees with the adjacency walk") {
  std::mt19937_64 rng(4);
  for (int i = 0; i < 80; ++i) {
    const Model m = i < 20 ? random_model(2, 2, {2, 2}, 2, 0.0, rng) : [&] {
      RandomModelShape shape;
      shape.sparsity = i % 2 ? 0.6 : 0.0;
      shape.num_objectives = 2 + i % 2;
      return random_model(shape, rng);
    }();
    const CanonicalProgram cp(m);
    const auto cmp = report::compare_with_oracle(enumerate_efficient(cp), brute_force_oracle(m));
    CHECK_MESSAGE(cmp.match, cmp.detail);
  }
}

TEST_CASE("oracle size limit") {
  std::mt19937_64 rng(5);
  const Model m = random_model(3, 4, {5, 5, 5}, 2, 0.0, rng);
  CHECK(m.layout().deterministic_policy_count() > kOracleLimit);
  CHECK_THROWS_AS(brute_force_oracle(m), ModelError);
  CHECK_THROWS_AS(brute_force_oracle_serial(m), ModelError);
}
