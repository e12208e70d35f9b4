#include "robustna/supports.hpp"

namespace robustna {

namespace {

SupportSet collect(const ScenarioTree& tree, std::size_t node, const std::vector<bool>& charged, SupportKind kind) {
  const Node& n = tree.node(node);
  SupportSet s;
  s.node = node;
  s.provenance = kind;
  s.point_of_child.assign(n.children.size(), SupportSet::kUncharged);
  for (std::size_t k = 0; k < n.children.size(); ++k)
    if (charged[k]) s.point_of_child[k] = s.points.insert(tree.node(n.children[k]).price - n.price);
  return s;
}

void require_inner(const ScenarioTree& tree, std::size_t node) {
  if (tree.node(node).is_leaf()) throw Error("no conditional support at leaf '" + tree.node(node).id + "'");
}

}  // namespace

SupportSet support_of_prior(const ScenarioTree& tree, std::size_t node, const LocalPrior& prior) {
  require_inner(tree, node);
  const Node& n = tree.node(node);
  if (prior.weights.size() != n.children.size())
    throw Error("prior does not match the children of '" + n.id + "'");
  std::vector<bool> charged(n.children.size());
  for (std::size_t k = 0; k < charged.size(); ++k) charged[k] = sgn(prior.weights[k]) > 0;
  return collect(tree, node, charged, SupportKind::SinglePrior);
}

SupportSet union_support(const ScenarioTree& tree, std::size_t node) {
  require_inner(tree, node);
  const Node& n = tree.node(node);
  std::vector<bool> charged(n.children.size());
  for (std::size_t k = 0; k < charged.size(); ++k) charged[k] = edge_charged(tree, node, k);
  return collect(tree, node, charged, SupportKind::Union);
}

SupportSet selection_support(const ScenarioTree& tree, std::size_t node, const KernelSelection& selection) {
  require_inner(tree, node);
  SupportSet s = support_of_prior(tree, node, mixed_kernel(tree, selection, node));
  s.provenance = SupportKind::Selection;
  return s;
}

}  // namespace robustna
