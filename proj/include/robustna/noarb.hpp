#pragma once

#include "robustna/geometry.hpp"
#include "robustna/market.hpp"
#include "robustna/supports.hpp"

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

namespace robustna {

/// Geometric no-arbitrage test at one node.
struct LocalNAReport {
  std::size_t node = 0;
  SupportSet support;
  std::size_t aff_dim = 0;
  bool ok = false;
  InteriorCertificate certificate;
};

LocalNAReport local_na(const ScenarioTree& tree, std::size_t node);

/// Quasi-sure verdict with certificates. `per_node` covers every non-polar
/// inner node in index order.
struct GlobalNAReport {
  bool holds = true;
  std::optional<std::size_t> failing_node;
  std::optional<Strategy> arbitrage;
  std::vector<LocalNAReport> per_node;
};

GlobalNAReport quasi_sure_na(const ScenarioTree& tree);

/// Holdings `h` at `node`, zero elsewhere. Requires h·Δ >= 0 on the node's
/// whole support with strict inequality somewhere, and `node` non-polar.
Strategy extract_arbitrage(const ScenarioTree& tree, std::size_t node, const Point& h);

struct ArbitrageWitness {
  Strategy strategy;
  std::size_t leaf = 0;  ///< first non-polar leaf with positive terminal value
  Rational objective;    ///< sum of terminal values over non-polar leaves
};

/// One LP over all holdings (max-norm box 1): maximize the total terminal
/// value over non-polar leaves subject to non-negative terminal value on each.
std::optional<ArbitrageWitness> global_arbitrage_search(const ScenarioTree& tree);

struct StrongNAReport {
  bool holds = true;
  std::vector<std::pair<std::size_t, std::size_t>> witnesses;  ///< (node, extreme index)
};

StrongNAReport strong_na(const ScenarioTree& tree);

struct WeakNAReport {
  bool holds = false;
  std::optional<KernelSelection> witness;
  /// Chosen extreme subset per node (empty when the node is not viable or a leaf).
  std::vector<std::vector<std::size_t>> chosen;
};

WeakNAReport weak_na(const ScenarioTree& tree);

/// Single-prior verdict for the measure a selection induces.
struct SinglePriorNA {
  bool holds = true;
  std::optional<std::size_t> failing_node;
};

SinglePriorNA single_prior_na(const ScenarioTree& tree, const KernelSelection& selection);

struct KappaResult {
  double kappa = 0;
  bool exact = true;
  std::vector<std::vector<double>> critical_directions;  ///< unit vectors in R^d
};

/// inf over unit h in the span of the node's support of the largest prior
/// mass of {children : h·Δ < -beta}. Exact sweep for span dimension <= 2,
/// Fibonacci-sphere sampling (estimate, exact = false) above.
KappaResult kappa_for_beta(const ScenarioTree& tree, std::size_t node, const Rational& beta,
                           const std::vector<LocalPrior>& priors);
KappaResult kappa_for_beta(const ScenarioTree& tree, std::size_t node, double beta,
                           const std::vector<LocalPrior>& priors);

/// Prior mass of {children : h·Δ < -beta·|h|}, by direct summation.
double loss_mass(const ScenarioTree& tree, std::size_t node, const std::vector<double>& h, double beta,
                 const LocalPrior& prior);

struct QuantConstants {
  double epsilon = 0;
  double beta = 0;
  double kappa = 0;
  double alpha = 0;
  bool exact = true;
  std::optional<Rational> epsilon_exact;
};

QuantConstants quantitative_constants(const ScenarioTree& tree, std::size_t node);

/// Quantitative verdict computed without the relative-interior LP: facet
/// margin > 0 and kappa(margin / 2) > 0 at every non-polar inner node.
SinglePriorNA quantitative_na(const ScenarioTree& tree);

}  // namespace robustna
