#pragma once

#include "robustna/geometry.hpp"
#include "robustna/market.hpp"

#include <cstddef>
#include <limits>
#include <vector>

namespace robustna {

enum class SupportKind { SinglePrior, Union, Selection };

/// Conditional support of the one-step price increment at a node.
struct SupportSet {
  static constexpr std::size_t kUncharged = std::numeric_limits<std::size_t>::max();

  std::size_t node = 0;
  PointSet points;
  SupportKind provenance = SupportKind::Union;
  /// For every child position, the index of its increment in `points`, or
  /// kUncharged. Children with equal increments share a point.
  std::vector<std::size_t> point_of_child;
};

/// Increments to the children charged by `prior`.
SupportSet support_of_prior(const ScenarioTree& tree, std::size_t node, const LocalPrior& prior);

/// Union over the node's extremes; the support of the whole prior set.
SupportSet union_support(const ScenarioTree& tree, std::size_t node);

/// Support of the mixed kernel a selection picks at `node`.
SupportSet selection_support(const ScenarioTree& tree, std::size_t node, const KernelSelection& selection);

}  // namespace robustna
