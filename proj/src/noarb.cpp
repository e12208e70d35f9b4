#include "robustna/noarb.hpp"

#include "robustna/lp.hpp"
#include "robustna/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

namespace robustna {

LocalNAReport local_na(const ScenarioTree& tree, std::size_t node) {
  LocalNAReport r;
  r.node = node;
  r.support = union_support(tree, node);
  r.aff_dim = affine_hull(r.support.points).dim;
  r.certificate = origin_in_relative_interior(r.support.points);
  r.ok = r.certificate.interior;
  return r;
}

Strategy extract_arbitrage(const ScenarioTree& tree, std::size_t node, const Point& h) {
  const Node& n = tree.node(node);
  if (n.is_leaf()) throw Error("cannot trade at leaf '" + n.id + "'");
  if (h.dim() != tree.dim()) throw Error("holding dimension mismatch");
  if (!non_polar_nodes(tree)[node]) throw Error("node '" + n.id + "' is polar");
  const SupportSet support = union_support(tree, node);
  bool strict = false;
  for (const auto& p : support.points) {
    const Rational gain = dot(h, p);
    if (sgn(gain) < 0) throw Error("direction loses on the support of '" + n.id + "'");
    strict = strict || sgn(gain) > 0;
  }
  if (!strict) throw Error("direction gains nowhere on the support of '" + n.id + "'");
  Strategy s = Strategy::zero(tree);
  s.holdings[node] = h;
  return s;
}

GlobalNAReport quasi_sure_na(const ScenarioTree& tree) {
  const auto mask = non_polar_nodes(tree);
  std::vector<std::size_t> nodes;
  for (auto i : tree.inner_nodes())
    if (mask[i]) nodes.push_back(i);

  GlobalNAReport report;
  report.per_node.resize(nodes.size());
  parallel_for(nodes.size(), [&](std::size_t k) { report.per_node[k] = local_na(tree, nodes[k]); });
  for (const auto& local : report.per_node) {
    if (local.ok) continue;
    report.holds = false;
    report.failing_node = local.node;
    report.arbitrage = extract_arbitrage(tree, local.node, local.certificate.direction);
    break;
  }
  return report;
}

std::optional<ArbitrageWitness> global_arbitrage_search(const ScenarioTree& tree) {
  const auto mask = non_polar_nodes(tree);
  const std::size_t d = tree.dim();
  std::vector<std::size_t> first_var(tree.size(), 0);
  LinearProgram lp;
  for (auto i : tree.inner_nodes()) {
    if (!mask[i]) continue;
    first_var[i] = lp.num_variables();
    for (std::size_t j = 0; j < d; ++j) lp.add_variable({Rational(-1), Rational(1)});
  }
  std::vector<std::size_t> leaves;
  for (auto leaf : tree.leaves()) {
    if (!mask[leaf]) continue;
    leaves.push_back(leaf);
    std::vector<Rational> row(lp.num_variables());
    const auto path = tree.path_to(leaf);
    for (std::size_t k = 0; k + 1 < path.size(); ++k) {
      const Point step = tree.node(path[k + 1]).price - tree.node(path[k]).price;
      for (std::size_t j = 0; j < d; ++j) row[first_var[path[k]] + j] += step[j];
    }
    for (std::size_t v = 0; v < row.size(); ++v) lp.objective[v] += row[v];
    lp.add_constraint(std::move(row), Sense::GreaterEqual, 0);
  }
  const LPResult res = solve_lp(lp);
  if (res.status != LPStatus::Optimal) throw Error("internal: arbitrage LP not optimal");
  if (sgn(res.objective_value) <= 0) return std::nullopt;

  ArbitrageWitness w{Strategy::zero(tree), 0, res.objective_value};
  for (auto i : tree.inner_nodes()) {
    if (!mask[i]) continue;
    for (std::size_t j = 0; j < d; ++j) w.strategy.holdings[i][j] = res.solution[first_var[i] + j];
  }
  for (auto leaf : leaves) {
    if (sgn(portfolio_value(tree, w.strategy, 0, leaf)) > 0) {
      w.leaf = leaf;
      break;
    }
  }
  return w;
}

StrongNAReport strong_na(const ScenarioTree& tree) {
  const auto mask = non_polar_nodes(tree);
  std::vector<std::pair<std::size_t, std::size_t>> jobs;
  for (auto i : tree.inner_nodes())
    if (mask[i])
      for (std::size_t e = 0; e < tree.node(i).priors.extremes.size(); ++e) jobs.emplace_back(i, e);
  std::vector<char> ok(jobs.size(), 0);
  parallel_for(jobs.size(), [&](std::size_t k) {
    const auto [i, e] = jobs[k];
    const SupportSet s = support_of_prior(tree, i, tree.node(i).priors.extremes[e]);
    ok[k] = origin_in_relative_interior(s.points).interior ? 1 : 0;
  });
  StrongNAReport report;
  for (std::size_t k = 0; k < jobs.size(); ++k)
    if (!ok[k]) report.witnesses.push_back(jobs[k]);
  report.holds = report.witnesses.empty();
  return report;
}

namespace {

constexpr std::size_t kMaxSubsetExtremes = 20;

// Visits the non-empty subsets of {0..k-1} by size, then lexicographically.
template <typename Visit>
bool for_each_subset(std::size_t k, Visit&& visit) {
  std::vector<std::size_t> pick;
  for (std::size_t size = 1; size <= k; ++size) {
    pick.resize(size);
    for (std::size_t i = 0; i < size; ++i) pick[i] = i;
    for (;;) {
      if (visit(pick)) return true;
      std::size_t i = size;
      while (i > 0 && pick[i - 1] == k - size + i - 1) --i;
      if (i == 0) break;
      ++pick[i - 1];
      for (std::size_t j = i; j < size; ++j) pick[j] = pick[j - 1] + 1;
    }
  }
  return false;
}

}  // namespace

WeakNAReport weak_na(const ScenarioTree& tree) {
  WeakNAReport report;
  report.chosen.resize(tree.size());
  std::vector<bool> viable(tree.size(), true);
  for (std::size_t idx = tree.size(); idx-- > 0;) {
    const Node& n = tree.node(idx);
    if (n.is_leaf()) continue;
    const std::size_t k = n.priors.extremes.size();
    if (k > kMaxSubsetExtremes)
      throw Error("weak no-arbitrage search: too many extremes at '" + n.id + "'");
    viable[idx] = for_each_subset(k, [&](const std::vector<std::size_t>& subset) {
      std::vector<bool> charged(n.children.size(), false);
      for (auto e : subset)
        for (std::size_t c = 0; c < n.children.size(); ++c)
          if (sgn(n.priors.extremes[e].weights[c]) > 0) charged[c] = true;
      PointSet points;
      for (std::size_t c = 0; c < n.children.size(); ++c) {
        if (!charged[c]) continue;
        if (!viable[n.children[c]]) return false;
        points.insert(tree.node(n.children[c]).price - n.price);
      }
      if (!origin_in_relative_interior(points).interior) return false;
      report.chosen[idx] = subset;
      return true;
    });
  }
  report.holds = viable[tree.root()] || tree.node(tree.root()).is_leaf();
  if (report.holds) {
    KernelSelection sel = uniform_selection(tree);
    for (auto i : tree.inner_nodes()) {
      const auto& subset = report.chosen[i];
      if (subset.empty()) continue;
      auto& c = sel.coefficients[i];
      std::fill(c.begin(), c.end(), Rational(0));
      for (auto e : subset) c[e] = ratio(1, static_cast<long>(subset.size()));
    }
    report.witness = std::move(sel);
  }
  return report;
}

SinglePriorNA single_prior_na(const ScenarioTree& tree, const KernelSelection& selection) {
  check_selection(tree, selection);
  const auto charged = charged_nodes(tree, selection);
  for (auto i : tree.inner_nodes()) {
    if (!charged[i]) continue;
    if (!origin_in_relative_interior(selection_support(tree, i, selection).points).interior)
      return {false, i};
  }
  return {true, std::nullopt};
}

namespace {

std::vector<std::vector<double>> orthonormalize(const std::vector<Point>& basis) {
  std::vector<std::vector<double>> out;
  for (const auto& b : basis) {
    std::vector<double> v = b.to_doubles();
    for (const auto& e : out) {
      double proj = 0;
      for (std::size_t i = 0; i < v.size(); ++i) proj += v[i] * e[i];
      for (std::size_t i = 0; i < v.size(); ++i) v[i] -= proj * e[i];
    }
    double norm = 0;
    for (double x : v) norm += x * x;
    norm = std::sqrt(norm);
    for (double& x : v) x /= norm;
    out.push_back(std::move(v));
  }
  return out;
}

double dot_d(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

struct LossEvaluator {
  std::vector<std::vector<double>> deltas;  // per child
  const std::vector<LocalPrior>* priors;
  double beta;

  // excluded: child positions treated as not losing (arc endpoints)
  double worst_case(const std::vector<double>& h, double tol, const std::vector<bool>* excluded) const {
    double best = 0;
    for (const auto& p : *priors) {
      double mass = 0;
      for (std::size_t c = 0; c < deltas.size(); ++c) {
        if (sgn(p.weights[c]) == 0) continue;
        if (excluded && (*excluded)[c]) continue;
        if (dot_d(h, deltas[c]) < -beta - tol) mass += p.weights[c].get_d();
      }
      best = std::max(best, mass);
    }
    return best;
  }
};

}  // namespace

double loss_mass(const ScenarioTree& tree, std::size_t node, const std::vector<double>& h, double beta,
                 const LocalPrior& prior) {
  const Node& n = tree.node(node);
  double norm = std::sqrt(dot_d(h, h));
  double mass = 0;
  for (std::size_t c = 0; c < n.children.size(); ++c) {
    if (sgn(prior.weights.at(c)) == 0) continue;
    const auto step = (tree.node(n.children[c]).price - n.price).to_doubles();
    if (dot_d(h, step) < -beta * norm) mass += prior.weights[c].get_d();
  }
  return mass;
}

KappaResult kappa_for_beta(const ScenarioTree& tree, std::size_t node, double beta,
                           const std::vector<LocalPrior>& priors) {
  if (!(beta > 0) || !std::isfinite(beta)) throw Error("kappa requires beta > 0");
  return kappa_for_beta(tree, node, Rational(beta), priors);
}

KappaResult kappa_for_beta(const ScenarioTree& tree, std::size_t node, const Rational& beta,
                           const std::vector<LocalPrior>& priors) {
  if (sgn(beta) <= 0) throw Error("kappa requires beta > 0");
  const Node& n = tree.node(node);
  if (n.is_leaf()) throw Error("no kappa at leaf '" + n.id + "'");
  for (const auto& p : priors)
    if (p.weights.size() != n.children.size()) throw Error("prior does not match the children of '" + n.id + "'");

  const SupportSet support = union_support(tree, node);
  const std::vector<Point> basis = linear_span_basis(support.points);
  const std::size_t k = basis.size();
  std::vector<Point> steps;
  for (auto c : n.children) steps.push_back(tree.node(c).price - n.price);

  KappaResult result;
  if (k == 0) {
    result.kappa = 1;
    return result;
  }

  if (k == 1) {
    // h = ±b/|b|: s·(b·Δ) < 0 and (b·Δ)^2 > beta^2 |b|^2, decided exactly.
    const Point& b = basis[0];
    const Rational threshold = beta * beta * dot(b, b);
    const double bnorm = std::sqrt(dot(b, b).get_d());
    result.kappa = 1;
    for (int s : {1, -1}) {
      double worst = 0;
      for (const auto& p : priors) {
        Rational mass;
        for (std::size_t c = 0; c < steps.size(); ++c) {
          if (sgn(p.weights[c]) == 0) continue;
          const Rational proj = dot(b, steps[c]);
          if (s * sgn(proj) < 0 && proj * proj > threshold) mass += p.weights[c];
        }
        worst = std::max(worst, mass.get_d());
      }
      result.kappa = std::min(result.kappa, worst);
      std::vector<double> h = b.to_doubles();
      for (double& x : h) x *= s / bnorm;
      result.critical_directions.push_back(std::move(h));
    }
    return result;
  }

  const auto frame = orthonormalize(basis);
  LossEvaluator eval{{}, &priors, beta.get_d()};
  for (const auto& s : steps) eval.deltas.push_back(s.to_doubles());
  auto direction = [&](const std::vector<double>& coords) {
    std::vector<double> h(tree.dim(), 0.0);
    for (std::size_t j = 0; j < coords.size(); ++j)
      for (std::size_t i = 0; i < h.size(); ++i) h[i] += coords[j] * frame[j][i];
    return h;
  };

  if (k == 2) {
    // Child c loses on an open arc of angles; the worst-case mass is piecewise
    // constant between arc endpoints, so endpoints and midpoints suffice.
    const double tol = 1e-12 * std::max(1.0, eval.beta);
    struct Endpoint {
      double angle;
      std::size_t child;
    };
    std::vector<Endpoint> ends;
    constexpr double two_pi = 2 * std::numbers::pi;
    auto wrap = [&](double a) {
      a = std::fmod(a, two_pi);
      return a < 0 ? a + two_pi : a;
    };
    for (std::size_t c = 0; c < steps.size(); ++c) {
      const double x = dot_d(eval.deltas[c], frame[0]);
      const double y = dot_d(eval.deltas[c], frame[1]);
      const double r = std::hypot(x, y);
      if (r <= eval.beta) continue;
      const double centre = std::atan2(y, x) + std::numbers::pi;
      const double half = std::acos(eval.beta / r);
      ends.push_back({wrap(centre - half), c});
      ends.push_back({wrap(centre + half), c});
    }
    std::sort(ends.begin(), ends.end(), [](const Endpoint& a, const Endpoint& b) { return a.angle < b.angle; });
    result.kappa = 1;
    auto consider = [&](double angle, const std::vector<bool>* excluded, double eval_tol) {
      auto h = direction({std::cos(angle), std::sin(angle)});
      result.kappa = std::min(result.kappa, eval.worst_case(h, eval_tol, excluded));
      result.critical_directions.push_back(std::move(h));
    };
    if (ends.empty()) {
      consider(0.0, nullptr, 0.0);
      return result;
    }
    for (std::size_t e = 0; e < ends.size(); ++e) {
      std::vector<bool> excluded(steps.size(), false);
      excluded[ends[e].child] = true;
      consider(ends[e].angle, &excluded, tol);
      const double next = e + 1 < ends.size() ? ends[e + 1].angle : ends[0].angle + two_pi;
      if (next - ends[e].angle > 1e-12) consider(0.5 * (ends[e].angle + next), nullptr, 0.0);
    }
    return result;
  }

  // k >= 3: sampled estimate.
  result.exact = false;
  result.kappa = 1;
  constexpr std::size_t samples = 12000;
  std::vector<double> coords(k);
  if (k == 3) {
    const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
    for (std::size_t i = 0; i < samples; ++i) {
      const double z = 1.0 - 2.0 * (static_cast<double>(i) + 0.5) / samples;
      const double r = std::sqrt(1.0 - z * z);
      const double phi = golden * static_cast<double>(i);
      coords = {r * std::cos(phi), r * std::sin(phi), z};
      result.kappa = std::min(result.kappa, eval.worst_case(direction(coords), 0.0, nullptr));
    }
  } else {
    std::mt19937_64 rng(0x5eed);
    std::normal_distribution<double> normal;
    for (std::size_t i = 0; i < samples; ++i) {
      double norm = 0;
      for (auto& x : coords) {
        x = normal(rng);
        norm += x * x;
      }
      for (auto& x : coords) x /= std::sqrt(norm);
      result.kappa = std::min(result.kappa, eval.worst_case(direction(coords), 0.0, nullptr));
    }
  }
  return result;
}

QuantConstants quantitative_constants(const ScenarioTree& tree, std::size_t node) {
  const LocalNAReport local = local_na(tree, node);
  if (!local.ok)
    throw Error("no quantitative constants: arbitrage at node '" + tree.node(node).id + "'");
  QuantConstants q;
  if (std::all_of(local.support.points.begin(), local.support.points.end(),
                  [](const Point& p) { return p.is_zero(); })) {
    q.epsilon = 2;
    q.epsilon_exact = Rational(2);
    q.beta = q.kappa = q.alpha = 1;
    return q;
  }
  const Inradius eps = inradius(local.support.points);
  q.epsilon = eps.value;
  q.epsilon_exact = eps.exact;
  q.beta = q.epsilon / 2;
  const KappaResult kappa = eps.exact ? kappa_for_beta(tree, node, Rational(*eps.exact / 2), tree.node(node).priors.extremes)
                                      : kappa_for_beta(tree, node, q.beta, tree.node(node).priors.extremes);
  q.kappa = kappa.kappa;
  q.exact = kappa.exact;
  q.alpha = std::min(q.beta, q.kappa);
  return q;
}

SinglePriorNA quantitative_na(const ScenarioTree& tree) {
  const auto mask = non_polar_nodes(tree);
  std::vector<std::size_t> nodes;
  for (auto i : tree.inner_nodes())
    if (mask[i]) nodes.push_back(i);
  std::vector<char> ok(nodes.size(), 0);
  parallel_for(nodes.size(), [&](std::size_t k) {
    const std::size_t i = nodes[k];
    const FacetMargin margin = facet_margin(union_support(tree, i).points);
    if (margin.sign <= 0) return;
    Rational root;
    const KappaResult kappa = exact_sqrt(margin.squared, root)
                                  ? kappa_for_beta(tree, i, Rational(root / 2), tree.node(i).priors.extremes)
                                  : kappa_for_beta(tree, i, margin.value() / 2, tree.node(i).priors.extremes);
    ok[k] = kappa.kappa > 0 ? 1 : 0;
  });
  for (std::size_t k = 0; k < nodes.size(); ++k)
    if (!ok[k]) return {false, nodes[k]};
  return {true, std::nullopt};
}

}  // namespace robustna
