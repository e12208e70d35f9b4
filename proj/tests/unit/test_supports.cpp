#include "robustna/models.hpp"
#include "robustna/supports.hpp"

#include <doctest.h>

using namespace robustna;

namespace {

PointSet ps1(std::initializer_list<long> xs) {
  PointSet ps;
  for (long x : xs) ps.insert(Point{Rational(x)});
  return ps;
}

}  // namespace

TEST_CASE("support_of_prior on EXEX") {
  const ScenarioTree t = ScenarioTree::build(fixture("exex").model);
  const std::size_t up = t.index_of("1"), mid = t.index_of("0");
  CHECK(support_of_prior(t, up, t.node(up).priors.extremes[0]).points.same_points(ps1({-1, 1})));
  CHECK(support_of_prior(t, mid, t.node(mid).priors.extremes[0]).points.same_points(ps1({1})));
  CHECK(support_of_prior(t, 0, t.node(0).priors.extremes[0]).points.same_points(ps1({0})));
  CHECK(support_of_prior(t, 0, t.node(0).priors.extremes[0]).provenance == SupportKind::SinglePrior);
}

TEST_CASE("union_support") {
  const ScenarioTree t = ScenarioTree::build(fixture("exex").model);
  const SupportSet root = union_support(t, 0);
  CHECK(root.points.same_points(ps1({-1, 0, 1})));
  CHECK(root.provenance == SupportKind::Union);
  const std::size_t up = t.index_of("1");
  CHECK(union_support(t, up).points.same_points(support_of_prior(t, up, t.node(up).priors.extremes[0]).points));
  CHECK_THROWS_AS(union_support(t, t.index_of("1,1")), Error);

  const ScenarioTree v = ScenarioTree::build(fixture("exex_item4").model);
  CHECK(union_support(v, 0).points.same_points(ps1({-1, 0, 1})));
}

TEST_CASE("selection_support") {
  const ScenarioTree t = ScenarioTree::build(fixture("exex").model);
  CHECK(selection_support(t, 0, uniform_selection(t)).points.same_points(union_support(t, 0).points));
  std::vector<std::size_t> choice(t.size(), 0);
  choice[0] = 1;
  const SupportSet s = selection_support(t, 0, extreme_selection(t, choice));
  CHECK(s.points.same_points(ps1({-1, 1})));
  CHECK(s.provenance == SupportKind::Selection);
  CHECK(s.point_of_child[t.child_position(0, t.index_of("0"))] == SupportSet::kUncharged);
  CHECK_THROWS_AS(selection_support(t, t.index_of("1,1"), uniform_selection(t)), Error);
}

TEST_CASE("children with equal increments share a support point") {
  ModelSpec m;
  m.d = 1;
  m.T = 1;
  m.nodes = {{"r", 0, {0}, {"a", "b", "c"}, {{{"a", ratio(1, 2)}, {"b", ratio(1, 4)}, {"c", ratio(1, 4)}}}},
             {"a", 1, {1}, {}, {}},
             {"b", 1, {1}, {}, {}},
             {"c", 1, {-1}, {}, {}}};
  const ScenarioTree t = ScenarioTree::build(m);
  const SupportSet s = union_support(t, 0);
  CHECK(s.points.size() == 2);
  CHECK(s.point_of_child[0] == s.point_of_child[1]);
}
