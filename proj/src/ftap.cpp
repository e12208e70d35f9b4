#include "robustna/ftap.hpp"

#include "robustna/noarb.hpp"
#include "robustna/pstar.hpp"

#include <cstdint>
#include <map>

namespace robustna {

namespace {

void check_measure(const ScenarioTree& tree, const MartingaleMeasure& m) {
  if (m.leaf_weights.size() != tree.leaves().size())
    throw Error("measure has " + std::to_string(m.leaf_weights.size()) + " weights for " +
                std::to_string(tree.leaves().size()) + " leaves");
  Rational total;
  for (std::size_t l = 0; l < m.leaf_weights.size(); ++l) {
    if (sgn(m.leaf_weights[l]) < 0) throw Error("negative weight at leaf '" + tree.node(tree.leaves()[l]).id + "'");
    total += m.leaf_weights[l];
  }
  if (total != 1) throw Error("leaf weights sum to " + to_fraction_string(total));
}

// For every leaf: the child of `node` on its path, for every ancestor `node`.
std::vector<std::vector<std::size_t>> leaf_paths(const ScenarioTree& tree) {
  std::vector<std::vector<std::size_t>> out;
  for (auto leaf : tree.leaves()) out.push_back(tree.path_to(leaf));
  return out;
}

MartingaleResult solve_for_leaves(const ScenarioTree& tree, const std::vector<bool>& charged) {
  const auto paths = leaf_paths(tree);
  const auto& leaves = tree.leaves();
  std::vector<std::size_t> var(leaves.size(), SIZE_MAX);
  LinearProgram lp;
  for (std::size_t l = 0; l < leaves.size(); ++l)
    if (charged[leaves[l]]) var[l] = lp.add_variable();
  const std::size_t t = lp.add_variable({Rational(0), std::nullopt}, Rational(1));
  const std::size_t nv = lp.num_variables();

  for (auto i : tree.inner_nodes()) {
    if (!charged[i]) continue;
    const int depth = tree.node(i).t;
    for (std::size_t j = 0; j < tree.dim(); ++j) {
      std::vector<Rational> row(nv);
      bool any = false;
      for (std::size_t l = 0; l < leaves.size(); ++l) {
        if (var[l] == SIZE_MAX || paths[l][depth] != i) continue;
        row[var[l]] = delta(tree, i, paths[l][depth + 1])[j];
        any = any || sgn(row[var[l]]) != 0;
      }
      if (any) lp.add_constraint(std::move(row), Sense::Equal, 0);
    }
  }
  {
    std::vector<Rational> row(nv, Rational(1));
    row[t] = 0;
    lp.add_constraint(std::move(row), Sense::Equal, 1);
  }
  for (std::size_t l = 0; l < leaves.size(); ++l) {
    if (var[l] == SIZE_MAX) continue;
    std::vector<Rational> row(nv);
    row[var[l]] = 1;
    row[t] = -1;
    lp.add_constraint(std::move(row), Sense::GreaterEqual, 0);
  }

  const LPResult r = solve_lp(lp);
  MartingaleResult out;
  out.status = r.status;
  out.certificate = r.certificate;
  if (r.status != LPStatus::Optimal) return out;
  out.min_weight = r.objective_value;
  if (sgn(r.objective_value) <= 0) return out;
  MartingaleMeasure m;
  m.leaf_weights.assign(leaves.size(), Rational(0));
  for (std::size_t l = 0; l < leaves.size(); ++l)
    if (var[l] != SIZE_MAX) m.leaf_weights[l] = r.solution[var[l]];
  out.measure = std::move(m);
  return out;
}

}  // namespace

std::vector<Rational> node_masses(const ScenarioTree& tree, const MartingaleMeasure& m) {
  check_measure(tree, m);
  std::vector<Rational> mass(tree.size());
  for (std::size_t l = 0; l < tree.leaves().size(); ++l) mass[tree.leaves()[l]] = m.leaf_weights[l];
  for (std::size_t i = tree.size(); i-- > 1;) mass[*tree.node(i).parent] += mass[i];
  return mass;
}

bool is_martingale(const ScenarioTree& tree, const MartingaleMeasure& m) {
  const auto mass = node_masses(tree, m);
  for (auto i : tree.inner_nodes()) {
    if (sgn(mass[i]) == 0) continue;
    Point drift(tree.dim());
    for (auto c : tree.node(i).children) drift += mass[c] * delta(tree, i, c);
    if (!drift.is_zero()) return false;
  }
  return true;
}

MartingaleResult martingale_measure(const ScenarioTree& tree, const KernelSelection& reference) {
  return solve_for_leaves(tree, charged_nodes(tree, reference));
}

bool verify_ftap(const ScenarioTree& tree) {
  const GlobalNAReport na = quasi_sure_na(tree);
  if (!na.holds) {
    // Contrapositive: ½P̂ + ½Q charges the failing node for any Q, so one Q suffices.
    PStarSelection dominating{uniform_selection(tree), {}, {}};
    const KernelSelection q = extreme_selection(tree, std::vector<std::size_t>(tree.size(), 0));
    const KernelSelection mix = sample_P_class(tree, dominating, ratio(1, 2), q);
    return !martingale_measure(tree, mix).measure.has_value();
  }

  const PStarSelection pstar = construct_pstar(tree);
  std::map<std::vector<bool>, MartingaleResult> cache;
  auto check = [&](const KernelSelection& q) {
    const KernelSelection mix = sample_P_class(tree, pstar, ratio(1, 2), q);
    const auto mix_charged = charged_nodes(tree, mix);
    auto it = cache.find(mix_charged);
    if (it == cache.end()) it = cache.emplace(mix_charged, solve_for_leaves(tree, mix_charged)).first;
    const auto& m = it->second.measure;
    if (!m || !is_martingale(tree, *m)) return false;
    const auto q_charged = charged_nodes(tree, q);
    for (std::size_t l = 0; l < tree.leaves().size(); ++l) {
      const std::size_t leaf = tree.leaves()[l];
      const bool positive = sgn(m->leaf_weights[l]) > 0;
      if (positive != static_cast<bool>(mix_charged[leaf])) return false;
      if (q_charged[leaf] && !positive) return false;
    }
    return true;
  };

  constexpr std::size_t kEnumerationCap = 256;
  if (count_extreme_selections(tree, kEnumerationCap) <= kEnumerationCap) {
    bool all = true;
    for_each_extreme_selection(tree, [&](const KernelSelection& q) {
      all = check(q);
      return all;
    });
    return all;
  }
  // ½p* + ½Q charges exactly the non-polar leaves for every Q, so the
  // uniform selection stands in for all of them.
  return check(uniform_selection(tree));
}

}  // namespace robustna
