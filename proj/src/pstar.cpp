#include "robustna/pstar.hpp"

#include "robustna/lp.hpp"
#include "robustna/noarb.hpp"
#include "robustna/supports.hpp"

namespace robustna {

PStarSelection construct_pstar(const ScenarioTree& tree) {
  const GlobalNAReport na = quasi_sure_na(tree);
  if (!na.holds) throw Error("no P* exists: arbitrage at node '" + tree.node(*na.failing_node).id + "'");
  PStarSelection p;
  p.selection = uniform_selection(tree);
  p.support_matches.assign(tree.size(), true);
  p.interior.assign(tree.size(), true);
  const auto mask = non_polar_nodes(tree);
  for (auto i : tree.inner_nodes()) {
    if (!mask[i]) continue;
    const SupportSet s = selection_support(tree, i, p.selection);
    p.support_matches[i] = s.points.same_points(union_support(tree, i).points);
    p.interior[i] = origin_in_relative_interior(s.points).interior;
  }
  return p;
}

namespace {

// max λ  s.t.  Σ μ_e e + λ p = k,  Σ μ_e + λ = 1,  μ, λ >= 0.
Rational node_lambda(const Node& n, const LocalPrior& pstar, const LocalPrior& kernel) {
  const std::size_t k = n.priors.extremes.size();
  LinearProgram lp;
  for (std::size_t e = 0; e < k; ++e) lp.add_variable();
  const std::size_t lambda = lp.add_variable({Rational(0), Rational(1)}, Rational(1));
  for (std::size_t c = 0; c < n.children.size(); ++c) {
    std::vector<Rational> row(k + 1);
    for (std::size_t e = 0; e < k; ++e) row[e] = n.priors.extremes[e].weights[c];
    row[lambda] = pstar.weights[c];
    lp.add_constraint(std::move(row), Sense::Equal, kernel.weights[c]);
  }
  lp.add_constraint(std::vector<Rational>(k + 1, Rational(1)), Sense::Equal, 1);
  const LPResult r = solve_lp(lp);
  return r.status == LPStatus::Optimal ? r.objective_value : Rational(-1);
}

}  // namespace

PClassMembership in_P_class(const ScenarioTree& tree, const PStarSelection& pstar, const KernelSelection& selection) {
  check_selection(tree, pstar.selection);
  check_selection(tree, selection);
  PClassMembership m{true, Rational(1)};
  for (auto i : tree.inner_nodes()) {
    const Rational l = node_lambda(tree.node(i), mixed_kernel(tree, pstar.selection, i), mixed_kernel(tree, selection, i));
    if (l < m.lambda_max) m.lambda_max = l;
  }
  if (sgn(m.lambda_max) <= 0) {
    m.member = false;
    m.lambda_max = 0;
  }
  return m;
}

KernelSelection sample_P_class(const ScenarioTree& tree, const PStarSelection& pstar, const Rational& lambda,
                               const KernelSelection& q) {
  if (sgn(lambda) <= 0 || lambda > 1) throw Error("lambda must lie in (0, 1], got " + to_fraction_string(lambda));
  check_selection(tree, pstar.selection);
  check_selection(tree, q);
  KernelSelection out = pstar.selection;
  for (auto i : tree.inner_nodes()) {
    auto& c = out.coefficients[i];
    for (std::size_t e = 0; e < c.size(); ++e) c[e] = lambda * c[e] + (1 - lambda) * q.coefficients[i][e];
  }
  return out;
}

bool polar_equivalence(const ScenarioTree& tree, const PStarSelection& pstar) {
  const auto non_polar = non_polar_nodes(tree);
  if (charged_nodes(tree, pstar.selection) != non_polar) return false;
  // Nodes charged by some member λp* + (1−λ)q: an edge is usable when p* or
  // any extreme charges it.
  std::vector<bool> some_member(tree.size(), false);
  some_member[tree.root()] = true;
  for (std::size_t i = 0; i < tree.size(); ++i) {
    const Node& n = tree.node(i);
    if (!some_member[i] || n.is_leaf()) continue;
    const LocalPrior p = mixed_kernel(tree, pstar.selection, i);
    for (std::size_t c = 0; c < n.children.size(); ++c) {
      bool used = sgn(p.weights[c]) > 0;
      for (const auto& e : n.priors.extremes) used = used || sgn(e.weights[c]) > 0;
      if (used) some_member[n.children[c]] = true;
    }
  }
  return some_member == non_polar;
}

bool corodaniel_check(const ScenarioTree& tree, const PStarSelection& pstar, const KernelSelection& q) {
  const KernelSelection p = sample_P_class(tree, pstar, ratio(1, 2), q);
  const auto under_q = charged_nodes(tree, q);
  const auto under_p = charged_nodes(tree, p);
  for (std::size_t i = 0; i < tree.size(); ++i)
    if (under_q[i] && !under_p[i]) return false;
  return single_prior_na(tree, p).holds;
}

}  // namespace robustna
