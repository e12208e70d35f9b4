#pragma once

#include "robustna/market.hpp"

#include <cstddef>
#include <vector>

namespace robustna {

/// Arbitrage-free dominating prior: one kernel per node whose support equals
/// the union support and keeps the origin in its relative interior.
struct PStarSelection {
  KernelSelection selection;
  std::vector<bool> support_matches;  ///< per node; true off the non-polar inner nodes
  std::vector<bool> interior;         ///< per node; true off the non-polar inner nodes
};

/// Uniform mixture of all extremes at every node. Throws when NA fails.
PStarSelection construct_pstar(const ScenarioTree& tree);

struct PClassMembership {
  bool member = false;
  Rational lambda_max;  ///< largest common λ with selection = λ·p* + (1−λ)·q, q a kernel selection
};

/// Decides membership by one exact LP per inner node over the mixed kernels.
PClassMembership in_P_class(const ScenarioTree& tree, const PStarSelection& pstar, const KernelSelection& selection);

/// Coefficientwise λ·p* + (1−λ)·q. Throws unless 0 < λ <= 1.
KernelSelection sample_P_class(const ScenarioTree& tree, const PStarSelection& pstar, const Rational& lambda,
                               const KernelSelection& q);

bool polar_equivalence(const ScenarioTree& tree, const PStarSelection& pstar);

/// With P = ½p* + ½q: q ≪ P and single-prior NA(P).
bool corodaniel_check(const ScenarioTree& tree, const PStarSelection& pstar, const KernelSelection& q);

}  // namespace robustna
