#include "robustna/market.hpp"
#include "robustna/models.hpp"
#include "robustna/supports.hpp"

#include "../support/random_tree.hpp"

#include <doctest.h>

#include <random>

using namespace robustna;

namespace {

ScenarioTree exex_tree() { return ScenarioTree::build(fixture("exex").model); }

std::size_t idx(const ScenarioTree& t, const char* id) { return t.index_of(id); }

bool has_message(const std::vector<Diagnostic>& ds, Severity s, const std::string& needle) {
  for (const auto& d : ds)
    if (d.severity == s && d.message.find(needle) != std::string::npos) return true;
  return false;
}

}  // namespace

TEST_CASE("validate accepts the EXEX fixture") { CHECK(validate(fixture("exex").model).empty()); }

TEST_CASE("validate reports structural errors") {
  SUBCASE("weights summing to 0.9") {
    ModelSpec m = fixture("exex_item4").model;
    m.nodes[0].priors[0][1].weight = ratio(2, 5);
    CHECK(has_message(validate(m), Severity::Error, "sum to 9/10"));
    CHECK_THROWS_AS(ScenarioTree::build(m), Error);
  }
  SUBCASE("dead outcome") {
    ModelSpec m = fixture("exex_item4").model;
    m.nodes[0].priors = {{{"-1", ratio(1, 2)}, {"1", ratio(1, 2)}}};
    const auto ds = validate(m);
    CHECK(has_message(ds, Severity::Warning, "dead outcome"));
    CHECK_NOTHROW(ScenarioTree::build(m));
  }
  SUBCASE("weight on a non-child") {
    ModelSpec m = fixture("exex_item4").model;
    m.nodes[0].priors[0][0].child = "zz";
    CHECK(has_message(validate(m), Severity::Error, "not a child"));
  }
  SUBCASE("leaf before the horizon") {
    ModelSpec m = fixture("exex").model;
    m.T = 3;
    CHECK(has_message(validate(m), Severity::Error, "before horizon"));
  }
  SUBCASE("duplicate ids, wrong price dimension, negative weights") {
    ModelSpec m = fixture("exex_item4").model;
    m.nodes[2].id = "-1";
    m.nodes[3].price.push_back(1);
    m.nodes[0].priors[1][0].weight = ratio(-1, 2);
    const auto ds = validate(m);
    CHECK(has_message(ds, Severity::Error, "duplicate node id"));
    CHECK(has_message(ds, Severity::Error, "coordinates"));
    CHECK(has_message(ds, Severity::Error, "non-positive weight"));
  }
  SUBCASE("duplicate extremes") {
    ModelSpec m = fixture("exex_item4").model;
    m.nodes[0].priors.push_back(m.nodes[0].priors[0]);
    CHECK(has_message(validate(m), Severity::Error, "duplicate extreme"));
  }
}

TEST_CASE("built tree is ordered by time then id and round-trips") {
  const ScenarioTree t = exex_tree();
  CHECK(t.node(0).id == "root");
  CHECK(t.node(1).id == "-1");
  CHECK(t.node(2).id == "0");
  CHECK(t.node(3).id == "1");
  CHECK(ScenarioTree::build(t.to_spec()) == t);
  CHECK(t.leaves().size() == 5);
  CHECK(t.path_to(idx(t, "0,1")) == std::vector<std::size_t>{0, idx(t, "0"), idx(t, "0,1")});
}

TEST_CASE("delta") {
  const ScenarioTree t = exex_tree();
  CHECK(delta(t, 0, idx(t, "1")) == Point{Rational(1)});
  CHECK(delta(t, 0, idx(t, "0")) == Point{Rational(0)});
  CHECK_THROWS_AS(delta(t, 0, idx(t, "1,1")), Error);
}

TEST_CASE("portfolio_value") {
  const ScenarioTree t = exex_tree();
  Strategy zero = Strategy::zero(t);
  for (auto leaf : t.leaves()) CHECK(portfolio_value(t, zero, 5, leaf) == 5);
  Strategy s = Strategy::zero(t);
  s.holdings[idx(t, "0")] = Point{Rational(1)};
  CHECK(portfolio_value(t, s, 0, idx(t, "0,1")) == 1);
  CHECK_THROWS_AS(portfolio_value(t, s, 0, idx(t, "0")), Error);

  const ScenarioTree one = ScenarioTree::build(fixture("exex_item4").model);
  Strategy h = Strategy::zero(one);
  h.holdings[0] = Point{Rational(1)};
  CHECK(portfolio_value(one, h, 7, one.index_of("-1")) == 6);
}

TEST_CASE("path_probability") {
  const ScenarioTree t = exex_tree();
  std::vector<std::size_t> choice(t.size(), 0);
  choice[0] = 1;  // P_na at the root
  const KernelSelection sel = extreme_selection(t, choice);
  CHECK(path_probability(t, sel, 0) == 1);
  CHECK(path_probability(t, sel, idx(t, "1")) == ratio(1, 2));
  CHECK(path_probability(t, sel, idx(t, "0")) == 0);
  CHECK(path_probability(t, sel, idx(t, "0,1")) == 0);
}

TEST_CASE("non_polar_nodes") {
  const ScenarioTree t = exex_tree();
  for (bool b : non_polar_nodes(t)) CHECK(b);

  ModelSpec m = fixture("exex").model;
  m.nodes[0].priors = {{{"-1", ratio(1, 2)}, {"1", ratio(1, 2)}}};
  const ScenarioTree dead = ScenarioTree::build(m);
  const auto mask = non_polar_nodes(dead);
  CHECK_FALSE(mask[dead.index_of("0")]);
  CHECK_FALSE(mask[dead.index_of("0,1")]);
  CHECK(mask[dead.index_of("1,1")]);
}

TEST_CASE("uniform_mixture") {
  PriorSet one{{LocalPrior{{1, 0}}}};
  CHECK(uniform_mixture(one) == one.extremes[0]);
  PriorSet pair{{LocalPrior{{ratio(1, 2), 0, ratio(1, 2)}}, LocalPrior{{0, 0, 1}}}};
  // Oracle: (1/2 + 0)/2, (1/2 + 1)/2.
  CHECK(uniform_mixture(pair).weights == std::vector<Rational>{ratio(1, 4), 0, ratio(3, 4)});
  PriorSet diracs{{LocalPrior{{1, 0}}, LocalPrior{{0, 1}}}};
  CHECK(uniform_mixture(diracs).weights == std::vector<Rational>{ratio(1, 2), ratio(1, 2)});
}

TEST_CASE("check_selection rejects bad coefficients") {
  const ScenarioTree t = exex_tree();
  KernelSelection sel = uniform_selection(t);
  CHECK_NOTHROW(check_selection(t, sel));
  sel.coefficients[0][0] = ratio(1, 3);
  CHECK_THROWS_AS(check_selection(t, sel), Error);
  sel.coefficients[0] = {ratio(3, 2), ratio(-1, 2)};
  CHECK_THROWS_AS(check_selection(t, sel), Error);
}

TEST_CASE("property: market invariants on random trees") {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 150; ++trial) {
    const ScenarioTree t = ScenarioTree::build(testing_support::random_model(rng));
    const KernelSelection sel = testing_support::random_selection(rng, t);

    Rational total;
    for (auto leaf : t.leaves()) total += path_probability(t, sel, leaf);
    CHECK(total == 1);

    // Value linearity.
    Strategy a = Strategy::zero(t), b = Strategy::zero(t);
    for (auto i : t.inner_nodes())
      for (std::size_t j = 0; j < t.dim(); ++j) {
        a.holdings[i][j] = Rational(testing_support::uniform_int(rng, -3, 3));
        b.holdings[i][j] = ratio(testing_support::uniform_int(rng, -3, 3), 2);
      }
    Strategy sum = a;
    sum += b;
    for (auto leaf : t.leaves())
      CHECK(portfolio_value(t, sum, 3, leaf) == portfolio_value(t, a, 1, leaf) + portfolio_value(t, b, 2, leaf));

    // Polar consistency by enumeration.
    if (count_extreme_selections(t, 200) <= 200) {
      std::vector<bool> reached(t.size(), false);
      for_each_extreme_selection(t, [&](const KernelSelection& q) {
        for (std::size_t i = 0; i < t.size(); ++i)
          if (sgn(path_probability(t, q, i)) > 0) reached[i] = true;
        return true;
      });
      CHECK(reached == non_polar_nodes(t));
    }

    // Support monotonicity and inclusion chain.
    const KernelSelection positive = testing_support::random_selection(rng, t, true);
    for (auto i : t.inner_nodes()) {
      const SupportSet u = union_support(t, i);
      CHECK(selection_support(t, i, positive).points.same_points(u.points));
      CHECK(selection_support(t, i, sel).points.subset_of(u.points));
      PointSet from_extremes;
      for (std::size_t e = 0; e < t.node(i).priors.extremes.size(); ++e) {
        const SupportSet s = support_of_prior(t, i, t.node(i).priors.extremes[e]);
        CHECK(s.points.subset_of(u.points));
        if (sgn(sel.coefficients[i][e]) > 0)
          for (const auto& p : s.points) from_extremes.insert(p);
      }
      CHECK(selection_support(t, i, sel).points.same_points(from_extremes));
      // Characterization: a point is in D iff some extreme charges a child with that increment.
      const Node& n = t.node(i);
      for (std::size_t c = 0; c < n.children.size(); ++c) {
        const Point x = delta(t, i, n.children[c]);
        bool charged = false;
        for (std::size_t c2 = 0; c2 < n.children.size(); ++c2)
          if (delta(t, i, n.children[c2]) == x)
            for (const auto& e : n.priors.extremes) charged = charged || sgn(e.weights[c2]) > 0;
        CHECK(u.points.contains(x) == charged);
      }
    }
  }
}
