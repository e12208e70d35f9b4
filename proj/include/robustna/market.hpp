#pragma once

#include "robustna/geometry.hpp"
#include "robustna/rational.hpp"

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

namespace robustna {

using NodeId = std::string;

// ---------------------------------------------------------------------------
// Raw model description, as read from a model file or emitted by a generator.
// ---------------------------------------------------------------------------

struct PriorEntry {
  NodeId child;
  Rational weight;
  friend bool operator==(const PriorEntry&, const PriorEntry&) = default;
};

struct NodeSpec {
  NodeId id;
  int t = 0;
  std::vector<Rational> price;
  std::vector<NodeId> children;
  std::vector<std::vector<PriorEntry>> priors;  ///< extreme local priors; empty at leaves
  friend bool operator==(const NodeSpec&, const NodeSpec&) = default;
};

struct ModelSpec {
  std::size_t d = 1;
  int T = 1;
  std::vector<NodeSpec> nodes;
  friend bool operator==(const ModelSpec&, const ModelSpec&) = default;
};

enum class Severity { Error, Warning };

struct Diagnostic {
  Severity severity = Severity::Error;
  std::string location;
  std::string message;
};

std::string to_string(const Diagnostic& diag);

/// Structural checks of a raw description. Dead outcomes (children charged by
/// no extreme prior) are reported as warnings; everything else is an error.
std::vector<Diagnostic> validate(const ModelSpec& spec);

// ---------------------------------------------------------------------------
// Validated scenario tree.
// ---------------------------------------------------------------------------

/// Weights over a node's children, aligned with Node::children. Zero entries
/// mark uncharged children.
struct LocalPrior {
  std::vector<Rational> weights;
  friend bool operator==(const LocalPrior&, const LocalPrior&) = default;
};

/// Finitely generated convex prior set, held by its extreme points.
struct PriorSet {
  std::vector<LocalPrior> extremes;
  friend bool operator==(const PriorSet&, const PriorSet&) = default;
};

struct Node {
  NodeId id;
  int t = 0;
  Point price;
  std::optional<std::size_t> parent;
  std::vector<std::size_t> children;
  PriorSet priors;

  bool is_leaf() const { return children.empty(); }
  friend bool operator==(const Node&, const Node&) = default;
};

/// Immutable finite event tree. Nodes are indexed in (time, id) order, so
/// index order is the deterministic reporting order.
class ScenarioTree {
 public:
  /// Throws Error listing every error-level diagnostic.
  static ScenarioTree build(const ModelSpec& spec);

  ModelSpec to_spec() const;

  std::size_t dim() const { return d_; }
  int horizon() const { return T_; }
  std::size_t size() const { return nodes_.size(); }
  std::size_t root() const { return 0; }
  const Node& node(std::size_t i) const { return nodes_.at(i); }
  const std::vector<Node>& nodes() const { return nodes_; }
  std::optional<std::size_t> find(const NodeId& id) const;
  std::size_t index_of(const NodeId& id) const;

  const std::vector<std::size_t>& leaves() const { return leaves_; }
  const std::vector<std::size_t>& inner_nodes() const { return inner_; }

  /// Position of `child` among `node`'s children; throws when not adjacent.
  std::size_t child_position(std::size_t node, std::size_t child) const;

  /// Node indices root..node.
  std::vector<std::size_t> path_to(std::size_t node) const;

  friend bool operator==(const ScenarioTree& a, const ScenarioTree& b) {
    return a.d_ == b.d_ && a.T_ == b.T_ && a.nodes_ == b.nodes_;
  }

 private:
  std::size_t d_ = 1;
  int T_ = 1;
  std::vector<Node> nodes_;
  std::unordered_map<NodeId, std::size_t> index_;
  std::vector<std::size_t> leaves_;
  std::vector<std::size_t> inner_;
};

/// Post-construction warnings (dead outcomes) of a built tree.
std::vector<Diagnostic> validate(const ScenarioTree& tree);

/// One local prior per inner node, given as convex coefficients over that
/// node's extremes. Entries for leaves are empty.
struct KernelSelection {
  std::vector<std::vector<Rational>> coefficients;
  friend bool operator==(const KernelSelection&, const KernelSelection&) = default;
};

/// Holdings in each of the d assets, per inner node; leaves hold nothing.
struct Strategy {
  std::vector<Point> holdings;

  static Strategy zero(const ScenarioTree& tree);
  Strategy& operator+=(const Strategy& other);
};

Point delta(const ScenarioTree& tree, std::size_t node, std::size_t child);

Rational portfolio_value(const ScenarioTree& tree, const Strategy& strategy, const Rational& x,
                         std::size_t leaf);

/// Throws Error when coefficients are missing, negative, or do not sum to 1.
void check_selection(const ScenarioTree& tree, const KernelSelection& selection);

/// The local prior chosen at `node`: the coefficient-weighted mixture of extremes.
LocalPrior mixed_kernel(const ScenarioTree& tree, const KernelSelection& selection, std::size_t node);

/// Product of mixed kernel weights along the root-to-node path.
Rational path_probability(const ScenarioTree& tree, const KernelSelection& selection, std::size_t node);

/// Whether some extreme prior at `node` charges its child at `position`.
bool edge_charged(const ScenarioTree& tree, std::size_t node, std::size_t position);

/// Mask of nodes reachable through charged edges only.
std::vector<bool> non_polar_nodes(const ScenarioTree& tree);

/// Mask of nodes reached with positive probability under `selection`.
std::vector<bool> charged_nodes(const ScenarioTree& tree, const KernelSelection& selection);

LocalPrior uniform_mixture(const PriorSet& priors);

/// Equal coefficients over all extremes at every inner node.
KernelSelection uniform_selection(const ScenarioTree& tree);

/// Coefficient 1 on extreme `choice[node]` at every inner node.
KernelSelection extreme_selection(const ScenarioTree& tree, const std::vector<std::size_t>& choice);

/// Number of distinct extreme selections, saturating at `cap + 1`.
std::size_t count_extreme_selections(const ScenarioTree& tree, std::size_t cap);

/// Visits every extreme selection in lexicographic order of choices (inner
/// nodes in index order); stops early when `visit` returns false.
void for_each_extreme_selection(const ScenarioTree& tree,
                                const std::function<bool(const KernelSelection&)>& visit);

}  // namespace robustna
