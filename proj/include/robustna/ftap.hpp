#pragma once

#include "robustna/lp.hpp"
#include "robustna/market.hpp"

#include <optional>
#include <vector>

namespace robustna {

/// Probability on the leaves, aligned with ScenarioTree::leaves().
struct MartingaleMeasure {
  std::vector<Rational> leaf_weights;
};

/// Mass of every node: the sum of its descendant leaf weights.
std::vector<Rational> node_masses(const ScenarioTree& tree, const MartingaleMeasure& m);

/// Throws Error on negative weights, a wrong count, or a total other than 1.
bool is_martingale(const ScenarioTree& tree, const MartingaleMeasure& m);

struct MartingaleResult {
  std::optional<MartingaleMeasure> measure;
  LPStatus status = LPStatus::Infeasible;
  Rational min_weight;               ///< optimal smallest weight on reference-charged leaves
  std::vector<Rational> certificate; ///< LP duals or Farkas multipliers
};

/// Martingale measure with the same null leaves as `reference`, maximizing the
/// smallest charged-leaf weight. Absent when NA(reference) fails.
MartingaleResult martingale_measure(const ScenarioTree& tree, const KernelSelection& reference);

bool verify_ftap(const ScenarioTree& tree);

}  // namespace robustna
