#include "robustna/models.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <numbers>

namespace robustna {

namespace {

const Interval& at_period(const std::vector<Interval>& bounds, int t, const char* name) {
  if (bounds.empty()) throw Error(std::string("no bounds given for ") + name);
  if (bounds.size() == 1) return bounds[0];
  if (static_cast<std::size_t>(t) >= bounds.size())
    throw Error(std::string("missing ") + name + " bounds for period " + std::to_string(t));
  return bounds[static_cast<std::size_t>(t)];
}

// One period of a generated model: sorted outcome keys and extreme priors
// given as weights over those keys.
struct LocalLaw {
  std::vector<Rational> keys;
  std::vector<std::vector<Rational>> extremes;
};

// Builds the law from priors given as (key, weight) lists; drops zero weights
// and duplicate extremes.
LocalLaw make_law(const std::vector<std::vector<std::pair<Rational, Rational>>>& priors) {
  std::map<Rational, std::size_t> index;
  for (const auto& p : priors)
    for (const auto& [key, w] : p)
      if (sgn(w) > 0) index.emplace(key, 0);
  LocalLaw law;
  for (auto& [key, i] : index) {
    i = law.keys.size();
    law.keys.push_back(key);
  }
  for (const auto& p : priors) {
    std::vector<Rational> w(law.keys.size());
    for (const auto& [key, weight] : p)
      if (sgn(weight) > 0) w[index.at(key)] += weight;
    if (std::find(law.extremes.begin(), law.extremes.end(), w) == law.extremes.end()) law.extremes.push_back(std::move(w));
  }
  return law;
}

// Expands a recombination-free tree. `step(state, key)` gives the child state,
// `price(state)` the node price.
template <typename State>
ModelSpec expand(int T, const State& root, const std::vector<LocalLaw>& laws,
                 const std::function<State(const State&, const Rational&)>& step,
                 const std::function<std::vector<Rational>(const State&)>& price) {
  ModelSpec spec;
  spec.d = 1;
  spec.T = T;
  std::function<void(const NodeId&, int, const State&)> grow = [&](const NodeId& id, int t, const State& s) {
    NodeSpec n;
    n.id = id;
    n.t = t;
    n.price = price(s);
    std::vector<State> next;
    if (t < T) {
      const LocalLaw& law = laws[static_cast<std::size_t>(t)];
      for (std::size_t k = 0; k < law.keys.size(); ++k) {
        n.children.push_back(id + "." + std::to_string(k));
        next.push_back(step(s, law.keys[k]));
      }
      for (const auto& e : law.extremes) {
        std::vector<PriorEntry> prior;
        for (std::size_t k = 0; k < e.size(); ++k)
          if (sgn(e[k]) > 0) prior.push_back({n.children[k], e[k]});
        n.priors.push_back(std::move(prior));
      }
    }
    const auto children = n.children;
    spec.nodes.push_back(std::move(n));
    for (std::size_t k = 0; k < children.size(); ++k) grow(children[k], t + 1, next[k]);
  };
  grow("r", 0, root);
  return spec;
}

void check_binomial(const BinomialSpec& spec, bool allow_low_u) {
  if (spec.T < 1) throw Error("binomial model needs T >= 1");
  if (spec.N <= 1 || spec.M <= 1) throw Error("binomial scale factors need N > 1 and M > 1");
  for (const auto* b : {&spec.pi, &spec.u, &spec.d})
    if (b->size() != 1 && b->size() != static_cast<std::size_t>(spec.T))
      throw Error("bounds must be given once or once per period (T = " + std::to_string(spec.T) + ")");
  for (int t = 0; t < spec.T; ++t) {
    const auto& p = at_period(spec.pi, t, "pi");
    const auto& u = at_period(spec.u, t, "u");
    const auto& d = at_period(spec.d, t, "d");
    const std::string when = " at period " + std::to_string(t);
    if (sgn(p.lo) < 0 || p.lo > p.hi || p.hi > 1) throw Error("need 0 <= pi_t <= Pi_t <= 1" + when);
    if (p.lo >= 1 || sgn(p.hi) <= 0) throw Error("need pi_t < 1 and Pi_t > 0" + when);
    if (u.lo > u.hi || d.lo > d.hi) throw Error("empty u or d interval" + when);
    if (sgn(d.lo) <= 0 || d.lo >= 1 || u.hi <= 1) throw Error("need 0 < d_t < 1 < U_t" + when);
    if (!allow_low_u && u.lo < 1) throw Error("need u_t >= 1" + when);
  }
}

std::vector<LocalLaw> binomial_laws(const BinomialSpec& spec, const std::vector<Rational>& extra_u) {
  std::vector<LocalLaw> laws;
  for (int t = 0; t < spec.T; ++t) {
    auto us = grid_points(at_period(spec.u, t, "u"), spec.grid_u);
    for (const auto& a : extra_u)
      if (std::find(us.begin(), us.end(), a) == us.end()) us.push_back(a);
    std::sort(us.begin(), us.end());
    std::vector<std::vector<std::pair<Rational, Rational>>> priors;
    for (const auto& p : grid_points(at_period(spec.pi, t, "pi"), spec.grid_pi))
      for (const auto& u : us)
        for (const auto& d : grid_points(at_period(spec.d, t, "d"), spec.grid_d))
          priors.push_back({{u, p}, {d, 1 - p}});
    laws.push_back(make_law(priors));
  }
  return laws;
}

ModelSpec binomial_model(const BinomialSpec& spec, const std::vector<LocalLaw>& laws) {
  return expand<Rational>(
      spec.T, Rational(1), laws, [](const Rational& s, const Rational& y) { return Rational(s * y); },
      [](const Rational& s) { return std::vector<Rational>{s}; });
}

}  // namespace

std::vector<Rational> grid_points(const Interval& range, std::size_t count) {
  if (range.lo > range.hi) throw Error("empty interval");
  if (range.lo == range.hi) return {range.lo};
  if (count < 2) throw Error("a grid over a proper interval needs at least 2 points");
  std::vector<Rational> out;
  for (std::size_t k = 0; k < count; ++k)
    out.push_back(range.lo + (range.hi - range.lo) * ratio(static_cast<long>(k), static_cast<long>(count - 1)));
  return out;
}

ScenarioTree gen_binomial(const BinomialSpec& spec) {
  check_binomial(spec, false);
  return ScenarioTree::build(binomial_model(spec, binomial_laws(spec, {})));
}

BinomialAnalytics binomial_analytics(const BinomialSpec& spec, const ScenarioTree& tree, std::size_t node) {
  const Node& n = tree.node(node);
  if (n.is_leaf()) throw Error("no binomial analytics at leaf '" + n.id + "'");
  const Rational& S = n.price[0];
  const auto& p = at_period(spec.pi, n.t, "pi");
  const auto& u = at_period(spec.u, n.t, "u");
  const auto& d = at_period(spec.d, n.t, "d");
  BinomialAnalytics a;
  a.hull_lo = S * (d.lo - 1);
  a.hull_hi = S * (u.hi - 1);
  a.beta = S / spec.N * std::min(Rational((u.hi - 1) / 2), Rational((1 - d.lo) / 2));
  a.epsilon = 2 * a.beta;
  const Rational pibar = (p.lo + p.hi) / 2;
  a.kappa = std::min(pibar, Rational(1 - pibar)) / spec.M;
  const Rational a_plus = u.hi;
  const Rational b_plus = std::min(d.hi, Rational((d.lo + 1) / 2));
  const Rational a_minus = std::max(u.lo, Rational((u.hi + 1) / 2));
  const Rational b_minus = d.lo;
  std::map<Rational, Rational> kernel;
  kernel[a_plus] += pibar / 2;
  kernel[b_plus] += (1 - pibar) / 2;
  kernel[a_minus] += pibar / 2;
  kernel[b_minus] += (1 - pibar) / 2;
  a.pstar_kernel.assign(kernel.begin(), kernel.end());
  return a;
}

SnaFailModel gen_binomial_sna_fail(const BinomialSpec& spec, const Rational& a) {
  check_binomial(spec, true);
  for (int t = 0; t < spec.T; ++t) {
    const auto& u = at_period(spec.u, t, "u");
    if (u.lo >= 1) throw Error("spec forces u_t >= 1 at period " + std::to_string(t));
    if (a < u.lo || a >= 1) throw Error("need u_t <= a < 1 at period " + std::to_string(t));
  }
  const auto laws = binomial_laws(spec, {a});
  SnaFailModel out{ScenarioTree::build(binomial_model(spec, laws)), {}};
  const ScenarioTree& tree = out.tree;
  std::vector<std::size_t> choice(tree.size(), 0);
  for (auto i : tree.inner_nodes()) {
    const Node& n = tree.node(i);
    const Rational p = at_period(spec.pi, n.t, "pi").lo;
    const Rational d = at_period(spec.d, n.t, "d").lo;
    LocalPrior target{std::vector<Rational>(n.children.size())};
    for (std::size_t c = 0; c < n.children.size(); ++c) {
      const Rational y = tree.node(n.children[c]).price[0] / n.price[0];
      if (y == a) target.weights[c] += p;
      if (y == d) target.weights[c] += 1 - p;
    }
    const auto& ex = n.priors.extremes;
    const auto it = std::find(ex.begin(), ex.end(), target);
    if (it == ex.end()) throw Error("internal: witness prior missing at '" + n.id + "'");
    choice[i] = static_cast<std::size_t>(it - ex.begin());
  }
  out.witness = extreme_selection(tree, choice);
  return out;
}

std::vector<std::pair<Rational, Rational>> z_distribution(const DiffusionSpec& spec) {
  if (spec.grid < 21 || spec.grid % 2 == 0) throw Error("Z grid size must be odd and at least 21");
  if (sgn(spec.spacing) <= 0) throw Error("Z grid spacing must be positive");
  const long half = static_cast<long>(spec.grid / 2);
  std::vector<Rational> w(static_cast<std::size_t>(half) + 1);
  Rational total;
  for (long k = 0; k <= half; ++k) {
    const double z = Rational(spec.spacing * k).get_d();
    w[static_cast<std::size_t>(k)] = Rational(std::exp(-z * z / 2));
    total += k == 0 ? w[0] : Rational(2 * w[static_cast<std::size_t>(k)]);
  }
  for (auto& x : w) x /= total;
  Rational variance;
  for (long k = 1; k <= half; ++k) variance += 2 * w[static_cast<std::size_t>(k)] * (spec.spacing * k) * (spec.spacing * k);
  // Move mass between the centre and the two outer atoms.
  const Rational zmax = spec.spacing * half;
  const Rational shift = (1 - variance) / (zmax * zmax);
  w[0] -= shift;
  w[static_cast<std::size_t>(half)] += shift / 2;
  if (sgn(w[0]) <= 0 || sgn(w[static_cast<std::size_t>(half)]) <= 0)
    throw Error("Z grid too narrow for an exact unit variance");
  std::vector<std::pair<Rational, Rational>> out;
  for (long k = -half; k <= half; ++k) out.emplace_back(spec.spacing * k, w[static_cast<std::size_t>(std::labs(k))]);
  return out;
}

ScenarioTree gen_diffusion(const DiffusionSpec& spec, DiffusionVariant variant) {
  if (spec.T < 1) throw Error("diffusion model needs T >= 1");
  if (sgn(spec.sigma) <= 0) throw Error("volatility must be positive");
  if (sgn(spec.r) < 0) throw Error("drift bound must be non-negative");
  const auto z = z_distribution(spec);
  const Rational zmax = z.back().first;

  std::vector<std::vector<std::pair<Rational, Rational>>> priors;
  std::vector<Rational> drifts{spec.r};
  for (const Rational& mu : {Rational(-spec.r), Rational(0)})
    if (std::find(drifts.begin(), drifts.end(), mu) == drifts.end()) drifts.push_back(mu);
  for (const auto& mu : drifts) {
    std::vector<std::pair<Rational, Rational>> p;
    for (const auto& [zk, wk] : z) p.emplace_back(mu + spec.sigma * zk, wk);
    priors.push_back(std::move(p));
  }
  for (const auto& x : spec.atoms) {
    const Rational steps = x / spec.spacing;
    if (x < 1 || x > zmax || steps.get_den() != 1)
      throw Error("q_x atom " + to_fraction_string(x) + " must be a grid point >= 1");
    const Rational tail = 1 / (2 * x * x);
    priors.push_back({{-spec.sigma * x, tail}, {Rational(0), 1 - 2 * tail}, {spec.sigma * x, tail}});
  }
  const std::vector<LocalLaw> laws(static_cast<std::size_t>(spec.T), make_law(priors));
  auto price = [variant](const Rational& y) {
    if (variant == DiffusionVariant::Normal) return std::vector<Rational>{y};
    return std::vector<Rational>{Rational(std::exp(y.get_d()))};
  };
  return ScenarioTree::build(expand<Rational>(
      spec.T, spec.y0, laws, [](const Rational& y, const Rational& inc) { return Rational(y + inc); }, price));
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

DiffusionAnalytics diffusion_analytics(const DiffusionSpec& spec, const ScenarioTree& tree, std::size_t node,
                                       DiffusionVariant variant) {
  const Node& n = tree.node(node);
  if (n.is_leaf()) throw Error("no diffusion analytics at leaf '" + n.id + "'");
  const double r = spec.r.get_d();
  const double sigma = spec.sigma.get_d();
  DiffusionAnalytics a;
  a.beta = variant == DiffusionVariant::Normal ? std::numbers::ln2 : 0.5 * std::min(1.0, n.price[0].get_d());
  a.kappa = std::min(normal_cdf(-(std::numbers::ln2 + r) / sigma), 1 - normal_cdf((std::numbers::ln2 - r) / sigma));
  return a;
}

namespace {

NodeSpec make_node(NodeId id, int t, std::vector<Rational> price, std::vector<NodeId> children,
                   std::vector<std::vector<PriorEntry>> priors) {
  return {std::move(id), t, std::move(price), std::move(children), std::move(priors)};
}

std::vector<PriorEntry> half_half(const NodeId& a, const NodeId& b) { return {{a, ratio(1, 2)}, {b, ratio(1, 2)}}; }

Fixture exex(bool variant) {
  Fixture f;
  f.name = variant ? "exex_variant" : "exex";
  f.model.d = 1;
  f.model.T = 2;
  auto& nodes = f.model.nodes;
  nodes.push_back(make_node("root", 0, {2}, {"-1", "0", "1"}, {{{"0", Rational(1)}}, half_half("-1", "1")}));
  for (int w1 : {-1, 0, 1}) {
    const NodeId id = std::to_string(w1);
    const bool blocked = w1 == 0 && !variant;
    std::vector<int> moves = blocked ? std::vector<int>{1} : std::vector<int>{-1, 1};
    std::vector<NodeId> children;
    for (int w2 : moves) children.push_back(id + "," + std::to_string(w2));
    std::vector<std::vector<PriorEntry>> priors;
    if (!blocked) priors.push_back(half_half(children[0], children[1]));
    if (blocked || variant) priors.push_back({{id + ",1", Rational(1)}});
    nodes.push_back(make_node(id, 1, {2 + w1}, children, priors));
    for (std::size_t k = 0; k < moves.size(); ++k) nodes.push_back(make_node(children[k], 2, {2 + w1 + moves[k]}, {}, {}));
  }
  if (variant) {
    f.expected = {true, false, true, std::nullopt, std::nullopt,
                  "second-period priors Conv(P_na, P_1) everywhere: NA holds, the extreme P_1 breaks sNA"};
  } else {
    f.expected = {false, false, true, NodeId("0"), Point(std::vector<Rational>{1}),
                  "node 0 only moves up: buying one unit there is an arbitrage; P_na avoids node 0 so wNA holds"};
  }
  return f;
}

Fixture exex_item4() {
  Fixture f;
  f.name = "exex_item4";
  f.model.d = 1;
  f.model.T = 1;
  f.model.nodes = {
      make_node("root", 0, {0}, {"-1", "0", "1"}, {half_half("-1", "1"), half_half("0", "1")}),
      make_node("-1", 1, {-1}, {}, {}),
      make_node("0", 1, {0}, {}, {}),
      make_node("1", 1, {1}, {}, {}),
  };
  f.expected = {true, false, true, std::nullopt, std::nullopt,
                "P_1 charges both signs, P_2 never loses: NA holds for the hull, NA(P_2) fails"};
  return f;
}

Fixture exex_item5() {
  Fixture f;
  f.name = "exex_item5";
  f.model.d = 2;
  f.model.T = 1;
  f.model.nodes = {
      make_node("root", 0, {0, 0}, {"(0,0)", "(1,0)", "(0,1)", "(0,-1)"},
                {half_half("(0,0)", "(1,0)"), half_half("(0,1)", "(0,-1)")}),
      make_node("(0,0)", 1, {0, 0}, {}, {}),
      make_node("(1,0)", 1, {1, 0}, {}, {}),
      make_node("(0,1)", 1, {0, 1}, {}, {}),
      make_node("(0,-1)", 1, {0, -1}, {}, {}),
  };
  f.expected = {false, false, true, NodeId("root"), Point(std::vector<Rational>{1, 0}),
                "h = (1,0) never loses and gains under P_1; Aff(D) = R^2, Aff(D_P2) = {0} x R"};
  return f;
}

}  // namespace

BinomialSpec sna_fail_reference_spec() {
  BinomialSpec spec;
  spec.T = 2;
  spec.u = {{ratio(9, 10), ratio(13, 10)}};
  spec.d = {{ratio(7, 10), ratio(8, 10)}};
  return spec;
}

std::vector<std::string> fixture_names() {
  return {"exex", "exex_variant", "exex_item4", "exex_item5", "binomial_sna_fail_ref"};
}

Fixture fixture(const std::string& name) {
  if (name == "exex") return exex(false);
  if (name == "exex_variant") return exex(true);
  if (name == "exex_item4") return exex_item4();
  if (name == "exex_item5") return exex_item5();
  if (name == "binomial_sna_fail_ref") {
    Fixture f;
    f.name = name;
    f.model = gen_binomial_sna_fail(sna_fail_reference_spec(), ratio(19, 20)).tree.to_spec();
    f.expected = {true, false, true, std::nullopt, std::nullopt,
                  "u-grid contains a = 0.95 < 1: the prior on {a, d} only moves down, so sNA fails while NA holds"};
    return f;
  }
  std::string names;
  for (const auto& n : fixture_names()) names += (names.empty() ? "" : ", ") + n;
  throw Error("unknown fixture '" + name + "' (available: " + names + ")");
}

}  // namespace robustna
