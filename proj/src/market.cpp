#include "robustna/market.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

namespace robustna {

std::string to_string(const Diagnostic& diag) {
  std::string out = diag.severity == Severity::Error ? "error" : "warning";
  if (!diag.location.empty()) out += " at " + diag.location;
  return out + ": " + diag.message;
}

std::vector<Diagnostic> validate(const ModelSpec& spec) {
  std::vector<Diagnostic> out;
  auto error = [&](std::string where, std::string what) {
    out.push_back({Severity::Error, std::move(where), std::move(what)});
  };
  if (spec.d == 0) error("d", "asset count must be at least 1");
  if (spec.T < 0) error("T", "horizon must be non-negative");
  if (spec.nodes.empty()) {
    error("nodes", "model has no nodes");
    return out;
  }

  std::map<NodeId, std::size_t> by_id;
  for (std::size_t i = 0; i < spec.nodes.size(); ++i) {
    const auto& n = spec.nodes[i];
    const std::string where = "node '" + n.id + "'";
    if (n.id.empty()) error("nodes[" + std::to_string(i) + "]", "empty node id");
    if (!by_id.emplace(n.id, i).second) error(where, "duplicate node id");
    if (n.price.size() != spec.d)
      error(where, "price has " + std::to_string(n.price.size()) + " coordinates, expected " +
                       std::to_string(spec.d));
    if (n.t < 0 || n.t > spec.T) error(where, "time " + std::to_string(n.t) + " outside 0.." + std::to_string(spec.T));
  }

  std::map<NodeId, std::size_t> parent_count;
  for (const auto& n : spec.nodes) {
    const std::string where = "node '" + n.id + "'";
    std::set<NodeId> seen;
    for (const auto& c : n.children) {
      if (!seen.insert(c).second) error(where, "child '" + c + "' listed twice");
      auto it = by_id.find(c);
      if (it == by_id.end()) {
        error(where, "unknown child '" + c + "'");
        continue;
      }
      ++parent_count[c];
      if (spec.nodes[it->second].t != n.t + 1)
        error(where, "child '" + c + "' at time " + std::to_string(spec.nodes[it->second].t) +
                         ", expected " + std::to_string(n.t + 1));
    }
    const bool leaf = n.children.empty();
    if (leaf && n.t != spec.T) error(where, "leaf at time " + std::to_string(n.t) + " before horizon");
    if (!leaf && n.t >= spec.T) error(where, "node at horizon has children");
    if (leaf && !n.priors.empty()) error(where, "leaf carries priors");
    if (!leaf && n.priors.empty()) error(where, "inner node without priors");

    std::vector<std::map<NodeId, Rational>> normalized;
    for (std::size_t k = 0; k < n.priors.size(); ++k) {
      const std::string pw = where + " prior " + std::to_string(k);
      std::map<NodeId, Rational> weights;
      Rational total;
      if (n.priors[k].empty()) error(pw, "empty prior");
      for (const auto& e : n.priors[k]) {
        if (std::find(n.children.begin(), n.children.end(), e.child) == n.children.end())
          error(pw, "weight on '" + e.child + "' which is not a child");
        if (sgn(e.weight) <= 0) error(pw, "non-positive weight " + to_fraction_string(e.weight) + " on '" + e.child + "'");
        if (weights.count(e.child)) error(pw, "child '" + e.child + "' weighted twice");
        weights[e.child] += e.weight;
        total += e.weight;
      }
      if (!n.priors[k].empty() && total != 1)
        error(pw, "weights sum to " + to_fraction_string(total) + ", expected 1");
      if (std::find(normalized.begin(), normalized.end(), weights) != normalized.end())
        error(pw, "duplicate extreme prior");
      normalized.push_back(std::move(weights));
    }
    for (const auto& c : n.children) {
      bool charged = false;
      for (const auto& w : normalized) charged = charged || w.count(c) > 0;
      if (!charged && !n.priors.empty())
        out.push_back({Severity::Warning, where, "dead outcome: child '" + c + "' charged by no prior"});
    }
  }

  std::size_t roots = 0;
  for (const auto& n : spec.nodes) {
    const std::size_t parents = parent_count.count(n.id) ? parent_count[n.id] : 0;
    if (parents > 1) error("node '" + n.id + "'", "node has " + std::to_string(parents) + " parents");
    if (parents == 0) {
      ++roots;
      if (n.t != 0) error("node '" + n.id + "'", "parentless node at time " + std::to_string(n.t));
    }
  }
  if (roots != 1) error("nodes", "expected exactly one root, found " + std::to_string(roots));
  return out;
}

ScenarioTree ScenarioTree::build(const ModelSpec& spec) {
  const auto diags = validate(spec);
  std::string errors;
  for (const auto& dg : diags)
    if (dg.severity == Severity::Error) errors += (errors.empty() ? "" : "; ") + to_string(dg);
  if (!errors.empty()) throw Error("invalid model: " + errors);

  std::vector<std::size_t> order(spec.nodes.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const auto& x = spec.nodes[a];
    const auto& y = spec.nodes[b];
    return x.t != y.t ? x.t < y.t : x.id < y.id;
  });

  ScenarioTree tree;
  tree.d_ = spec.d;
  tree.T_ = spec.T;
  tree.nodes_.resize(order.size());
  for (std::size_t i = 0; i < order.size(); ++i) tree.index_[spec.nodes[order[i]].id] = i;
  for (std::size_t i = 0; i < order.size(); ++i) {
    const NodeSpec& s = spec.nodes[order[i]];
    Node& n = tree.nodes_[i];
    n.id = s.id;
    n.t = s.t;
    n.price = Point(s.price);
    for (const auto& c : s.children) {
      const std::size_t ci = tree.index_.at(c);
      n.children.push_back(ci);
      tree.nodes_[ci].parent = i;
    }
    for (const auto& prior : s.priors) {
      LocalPrior lp{std::vector<Rational>(s.children.size())};
      for (const auto& e : prior) {
        auto pos = std::find(s.children.begin(), s.children.end(), e.child) - s.children.begin();
        lp.weights[static_cast<std::size_t>(pos)] = e.weight;
      }
      n.priors.extremes.push_back(std::move(lp));
    }
    (n.children.empty() ? tree.leaves_ : tree.inner_).push_back(i);
  }
  return tree;
}

ModelSpec ScenarioTree::to_spec() const {
  ModelSpec spec;
  spec.d = d_;
  spec.T = T_;
  for (const auto& n : nodes_) {
    NodeSpec s;
    s.id = n.id;
    s.t = n.t;
    s.price = n.price.coords();
    for (auto c : n.children) s.children.push_back(nodes_[c].id);
    for (const auto& ex : n.priors.extremes) {
      std::vector<PriorEntry> entries;
      for (std::size_t k = 0; k < n.children.size(); ++k)
        if (sgn(ex.weights[k]) > 0) entries.push_back({nodes_[n.children[k]].id, ex.weights[k]});
      s.priors.push_back(std::move(entries));
    }
    spec.nodes.push_back(std::move(s));
  }
  return spec;
}

std::optional<std::size_t> ScenarioTree::find(const NodeId& id) const {
  auto it = index_.find(id);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::size_t ScenarioTree::index_of(const NodeId& id) const {
  auto i = find(id);
  if (!i) throw Error("unknown node '" + id + "'");
  return *i;
}

std::size_t ScenarioTree::child_position(std::size_t node, std::size_t child) const {
  const auto& ch = nodes_.at(node).children;
  auto it = std::find(ch.begin(), ch.end(), child);
  if (it == ch.end())
    throw Error("'" + nodes_.at(child).id + "' is not a child of '" + nodes_[node].id + "'");
  return static_cast<std::size_t>(it - ch.begin());
}

std::vector<std::size_t> ScenarioTree::path_to(std::size_t node) const {
  std::vector<std::size_t> path;
  for (std::optional<std::size_t> cur = node; cur; cur = nodes_.at(*cur).parent) path.push_back(*cur);
  std::reverse(path.begin(), path.end());
  return path;
}

std::vector<Diagnostic> validate(const ScenarioTree& tree) {
  std::vector<Diagnostic> out;
  for (auto i : tree.inner_nodes()) {
    const Node& n = tree.node(i);
    for (std::size_t k = 0; k < n.children.size(); ++k)
      if (!edge_charged(tree, i, k))
        out.push_back({Severity::Warning, "node '" + n.id + "'",
                       "dead outcome: child '" + tree.node(n.children[k]).id + "' charged by no prior"});
  }
  return out;
}

Strategy Strategy::zero(const ScenarioTree& tree) {
  Strategy s;
  s.holdings.resize(tree.size());
  for (auto i : tree.inner_nodes()) s.holdings[i] = Point(tree.dim());
  return s;
}

Strategy& Strategy::operator+=(const Strategy& other) {
  if (other.holdings.size() != holdings.size()) throw Error("strategy size mismatch");
  for (std::size_t i = 0; i < holdings.size(); ++i)
    if (holdings[i].dim() > 0) holdings[i] += other.holdings[i];
  return *this;
}

Point delta(const ScenarioTree& tree, std::size_t node, std::size_t child) {
  tree.child_position(node, child);
  return tree.node(child).price - tree.node(node).price;
}

Rational portfolio_value(const ScenarioTree& tree, const Strategy& strategy, const Rational& x,
                         std::size_t leaf) {
  if (!tree.node(leaf).is_leaf()) throw Error("'" + tree.node(leaf).id + "' is not a leaf");
  if (strategy.holdings.size() != tree.size()) throw Error("strategy does not match tree");
  Rational value = x;
  const auto path = tree.path_to(leaf);
  for (std::size_t k = 0; k + 1 < path.size(); ++k) {
    const Point& h = strategy.holdings[path[k]];
    if (h.dim() == 0) continue;
    value += dot(h, tree.node(path[k + 1]).price - tree.node(path[k]).price);
  }
  return value;
}

void check_selection(const ScenarioTree& tree, const KernelSelection& selection) {
  if (selection.coefficients.size() != tree.size()) throw Error("kernel selection does not match tree");
  for (auto i : tree.inner_nodes()) {
    const auto& c = selection.coefficients[i];
    const std::string where = "node '" + tree.node(i).id + "'";
    if (c.size() != tree.node(i).priors.extremes.size())
      throw Error("kernel selection at " + where + " has " + std::to_string(c.size()) +
                  " coefficients, expected " + std::to_string(tree.node(i).priors.extremes.size()));
    Rational total;
    for (const auto& v : c) {
      if (sgn(v) < 0) throw Error("negative mixture coefficient at " + where);
      total += v;
    }
    if (total != 1) throw Error("mixture coefficients at " + where + " sum to " + to_fraction_string(total));
  }
}

LocalPrior mixed_kernel(const ScenarioTree& tree, const KernelSelection& selection, std::size_t node) {
  const Node& n = tree.node(node);
  if (n.is_leaf()) throw Error("no kernel at leaf '" + n.id + "'");
  const auto& coeff = selection.coefficients.at(node);
  if (coeff.size() != n.priors.extremes.size()) throw Error("kernel selection does not match node '" + n.id + "'");
  LocalPrior out{std::vector<Rational>(n.children.size())};
  for (std::size_t e = 0; e < coeff.size(); ++e) {
    if (sgn(coeff[e]) == 0) continue;
    for (std::size_t k = 0; k < n.children.size(); ++k)
      out.weights[k] += coeff[e] * n.priors.extremes[e].weights[k];
  }
  return out;
}

Rational path_probability(const ScenarioTree& tree, const KernelSelection& selection, std::size_t node) {
  const auto path = tree.path_to(node);
  Rational p = 1;
  for (std::size_t k = 0; k + 1 < path.size() && sgn(p) != 0; ++k) {
    const LocalPrior kernel = mixed_kernel(tree, selection, path[k]);
    p *= kernel.weights[tree.child_position(path[k], path[k + 1])];
  }
  return p;
}

bool edge_charged(const ScenarioTree& tree, std::size_t node, std::size_t position) {
  for (const auto& ex : tree.node(node).priors.extremes)
    if (sgn(ex.weights.at(position)) > 0) return true;
  return false;
}

std::vector<bool> non_polar_nodes(const ScenarioTree& tree) {
  std::vector<bool> mask(tree.size(), false);
  mask[tree.root()] = true;
  for (std::size_t i = 0; i < tree.size(); ++i) {
    if (!mask[i]) continue;
    const Node& n = tree.node(i);
    for (std::size_t k = 0; k < n.children.size(); ++k)
      if (edge_charged(tree, i, k)) mask[n.children[k]] = true;
  }
  return mask;
}

std::vector<bool> charged_nodes(const ScenarioTree& tree, const KernelSelection& selection) {
  std::vector<bool> mask(tree.size(), false);
  mask[tree.root()] = true;
  for (std::size_t i = 0; i < tree.size(); ++i) {
    if (!mask[i] || tree.node(i).is_leaf()) continue;
    const LocalPrior kernel = mixed_kernel(tree, selection, i);
    for (std::size_t k = 0; k < kernel.weights.size(); ++k)
      if (sgn(kernel.weights[k]) > 0) mask[tree.node(i).children[k]] = true;
  }
  return mask;
}

LocalPrior uniform_mixture(const PriorSet& priors) {
  if (priors.extremes.empty()) throw Error("empty prior set");
  const Rational share(1, static_cast<unsigned long>(priors.extremes.size()));
  LocalPrior out{std::vector<Rational>(priors.extremes.front().weights.size())};
  for (const auto& ex : priors.extremes)
    for (std::size_t k = 0; k < ex.weights.size(); ++k) out.weights[k] += share * ex.weights[k];
  return out;
}

KernelSelection uniform_selection(const ScenarioTree& tree) {
  KernelSelection sel;
  sel.coefficients.resize(tree.size());
  for (auto i : tree.inner_nodes()) {
    const std::size_t k = tree.node(i).priors.extremes.size();
    sel.coefficients[i].assign(k, ratio(1, static_cast<long>(k)));
  }
  return sel;
}

KernelSelection extreme_selection(const ScenarioTree& tree, const std::vector<std::size_t>& choice) {
  if (choice.size() != tree.size()) throw Error("extreme choice does not match tree");
  KernelSelection sel;
  sel.coefficients.resize(tree.size());
  for (auto i : tree.inner_nodes()) {
    const std::size_t k = tree.node(i).priors.extremes.size();
    if (choice[i] >= k) throw Error("extreme index out of range at '" + tree.node(i).id + "'");
    sel.coefficients[i].assign(k, Rational(0));
    sel.coefficients[i][choice[i]] = 1;
  }
  return sel;
}

std::size_t count_extreme_selections(const ScenarioTree& tree, std::size_t cap) {
  std::size_t count = 1;
  for (auto i : tree.inner_nodes()) {
    count *= tree.node(i).priors.extremes.size();
    if (count > cap) return cap + 1;
  }
  return count;
}

void for_each_extreme_selection(const ScenarioTree& tree,
                                const std::function<bool(const KernelSelection&)>& visit) {
  const auto& inner = tree.inner_nodes();
  std::vector<std::size_t> choice(tree.size(), 0);
  for (;;) {
    if (!visit(extreme_selection(tree, choice))) return;
    std::size_t k = inner.size();
    while (k > 0) {
      const std::size_t i = inner[k - 1];
      if (++choice[i] < tree.node(i).priors.extremes.size()) break;
      choice[i] = 0;
      --k;
    }
    if (k == 0) return;
  }
}

}  // namespace robustna
