#pragma once

#include "robustna/market.hpp"

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace robustna {

struct Interval {
  Rational lo;
  Rational hi;
};

/// Robust binomial model. Each bound list holds one interval per period, or a
/// single interval used for every period.
struct BinomialSpec {
  int T = 1;
  std::vector<Interval> pi{{ratio(3, 10), ratio(3, 5)}};
  std::vector<Interval> u{{ratio(11, 10), ratio(13, 10)}};
  std::vector<Interval> d{{ratio(7, 10), ratio(9, 10)}};
  std::size_t grid_pi = 2;
  std::size_t grid_u = 2;
  std::size_t grid_d = 2;
  Rational N = 2;
  Rational M = 2;
};

/// Values of the grid on [lo, hi] with `count` points, endpoints included.
std::vector<Rational> grid_points(const Interval& range, std::size_t count);

ScenarioTree gen_binomial(const BinomialSpec& spec);

struct BinomialAnalytics {
  Rational hull_lo;      ///< S(d_t - 1)
  Rational hull_hi;      ///< S(U_t - 1)
  Rational epsilon;      ///< 2 beta
  Rational beta;         ///< S/N min((U-1)/2, (1-d)/2)
  Rational kappa;        ///< 1/M min(pibar, 1 - pibar)
  std::vector<std::pair<Rational, Rational>> pstar_kernel;  ///< (y, weight), y ascending
};

BinomialAnalytics binomial_analytics(const BinomialSpec& spec, const ScenarioTree& tree, std::size_t node);

struct SnaFailModel {
  ScenarioTree tree;
  KernelSelection witness;  ///< coefficient 1 on pi_lo δ_a + (1 - pi_lo) δ_{d_lo}
};

/// Binomial model whose u-grid also contains `a` in [u_t, 1).
SnaFailModel gen_binomial_sna_fail(const BinomialSpec& spec, const Rational& a);

enum class DiffusionVariant { Normal, Lognormal };

struct DiffusionSpec {
  int T = 1;
  Rational r = 0;
  Rational sigma = 1;
  std::size_t grid = 21;
  Rational spacing{1, 2};
  std::vector<Rational> atoms{Rational(2)};  ///< x values of the q_x priors
  Rational y0 = 1;
};

/// Standard-normal weights on the symmetric Z grid, corrected to mean 0 and
/// variance 1 exactly. Returned in ascending z order.
std::vector<std::pair<Rational, Rational>> z_distribution(const DiffusionSpec& spec);

ScenarioTree gen_diffusion(const DiffusionSpec& spec, DiffusionVariant variant);

struct DiffusionAnalytics {
  double beta = 0;
  double kappa = 0;
};

double normal_cdf(double x);

DiffusionAnalytics diffusion_analytics(const DiffusionSpec& spec, const ScenarioTree& tree, std::size_t node,
                                       DiffusionVariant variant);

struct FixtureExpectation {
  bool na = false;
  bool sna = false;
  bool wna = false;
  std::optional<NodeId> failing_node;
  std::optional<Point> direction;
  std::string description;
};

struct Fixture {
  std::string name;
  ModelSpec model;
  FixtureExpectation expected;
};

/// T = 2, pi in [0.3, 0.6], u in [0.9, 1.3], d in [0.7, 0.8], two-point grids.
BinomialSpec sna_fail_reference_spec();

std::vector<std::string> fixture_names();

/// Throws Error listing the available names on an unknown name.
Fixture fixture(const std::string& name);

}  // namespace robustna
