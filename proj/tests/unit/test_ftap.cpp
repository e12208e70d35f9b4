#include "robustna/ftap.hpp"
#include "robustna/models.hpp"
#include "robustna/noarb.hpp"
#include "robustna/pstar.hpp"

#include "../support/builders.hpp"
#include "../support/random_tree.hpp"

#include <doctest.h>

#include <random>

using namespace robustna;
using testing_support::one_period;

TEST_CASE("is_martingale") {
  const ScenarioTree t = one_period({{ratio(-1, 2)}, {Rational(1)}}, {{ratio(1, 2), ratio(1, 2)}});
  CHECK(is_martingale(t, {{ratio(2, 3), ratio(1, 3)}}));
  CHECK_FALSE(is_martingale(t, {{ratio(1, 2), ratio(1, 2)}}));
  CHECK_THROWS_AS(is_martingale(t, {{Rational(1)}}), Error);
  CHECK_THROWS_AS(is_martingale(t, {{Rational(2), Rational(-1)}}), Error);
  CHECK_THROWS_AS(is_martingale(t, {{ratio(1, 2), ratio(1, 3)}}), Error);
}

TEST_CASE("martingale_measure, one period") {
  // Oracle: q·(-1) + (1-q)·2 = 0 gives q = 2/3.
  const ScenarioTree t = one_period({{Rational(-1)}, {Rational(2)}}, {{ratio(1, 2), ratio(1, 2)}});
  const auto r = martingale_measure(t, uniform_selection(t));
  REQUIRE(r.measure);
  CHECK(r.status == LPStatus::Optimal);
  CHECK(r.measure->leaf_weights == std::vector<Rational>{ratio(2, 3), ratio(1, 3)});
  CHECK(r.min_weight == ratio(1, 3));
  CHECK(is_martingale(t, *r.measure));

  const ScenarioTree up = one_period({{Rational(1)}, {Rational(2)}}, {{ratio(1, 2), ratio(1, 2)}});
  const auto none = martingale_measure(up, uniform_selection(up));
  CHECK_FALSE(none.measure);
  CHECK(none.status != LPStatus::Optimal);
}

TEST_CASE("martingale_measure, binomial u = 2, d = 1/2") {
  BinomialSpec spec;
  spec.pi = {{ratio(1, 2), ratio(1, 2)}};
  spec.u = {{Rational(2), Rational(2)}};
  spec.d = {{ratio(1, 2), ratio(1, 2)}};
  const ScenarioTree t = gen_binomial(spec);
  const auto r = martingale_measure(t, uniform_selection(t));
  REQUIRE(r.measure);
  // Oracle: q·2 + (1-q)/2 = 1 gives q = 1/3 on the up state.
  Rational up;
  const auto& leaves = t.leaves();
  for (std::size_t k = 0; k < leaves.size(); ++k)
    if (t.node(leaves[k]).price[0] == 2) up = r.measure->leaf_weights[k];
  CHECK(up == ratio(1, 3));
}

TEST_CASE("verify_ftap on the fixtures") {
  for (const auto& name : fixture_names()) {
    CAPTURE(name);
    CHECK(verify_ftap(ScenarioTree::build(fixture(name).model)));
  }
}

TEST_CASE("reference null leaves carry no weight") {
  const ScenarioTree t = ScenarioTree::build(fixture("exex_variant").model);
  std::vector<std::size_t> choice(t.size(), 0);
  const KernelSelection q = extreme_selection(t, choice);
  const auto r = martingale_measure(t, q);
  if (!r.measure) {
    CHECK_FALSE(single_prior_na(t, q).holds);
    return;
  }
  const auto charged = charged_nodes(t, q);
  const auto& leaves = t.leaves();
  for (std::size_t k = 0; k < leaves.size(); ++k) CHECK((sgn(r.measure->leaf_weights[k]) > 0) == charged[leaves[k]]);
  CHECK(is_martingale(t, *r.measure));
}

TEST_CASE("property: martingale measures exist exactly for arbitrage-free references") {
  std::mt19937_64 rng(51);
  for (int trial = 0; trial < 200; ++trial) {
    const ScenarioTree t = ScenarioTree::build(testing_support::random_model(rng));
    const KernelSelection sel = testing_support::random_selection(rng, t);
    const auto r = martingale_measure(t, sel);
    CHECK(r.measure.has_value() == single_prior_na(t, sel).holds);
    if (r.measure) {
      CHECK(is_martingale(t, *r.measure));
      const auto charged = charged_nodes(t, sel);
      const auto& leaves = t.leaves();
      for (std::size_t k = 0; k < leaves.size(); ++k)
        CHECK((sgn(r.measure->leaf_weights[k]) > 0) == charged[leaves[k]]);
    }
    if (trial < 80) CHECK(verify_ftap(t));
  }
}
