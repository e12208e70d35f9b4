#include "robustna/report.hpp"

#include "robustna/supports.hpp"

#ifndef ROBUSTNA_VERSION
#define ROBUSTNA_VERSION "0.0.0"
#endif

namespace robustna {

std::string tool_version() { return ROBUSTNA_VERSION; }

namespace {

Json header(const std::string& command, const std::string& digest) {
  Json j;
  j["tool"] = {{"name", "noarb"}, {"version", tool_version()}};
  j["command"] = command;
  j["input_sha256"] = digest;
  return j;
}

Json weights_json(const std::vector<Rational>& w) {
  Json out = Json::array();
  for (const auto& q : w) out.push_back(to_fraction_string(q));
  return out;
}

Json local_json(const ScenarioTree& tree, const LocalNAReport& local) {
  const Node& n = tree.node(local.node);
  Json j;
  j["id"] = n.id;
  j["t"] = n.t;
  j["support"] = Json::array();
  for (const auto& p : local.support.points) j["support"].push_back(point_json(p));
  j["aff_dim"] = local.aff_dim;
  j["ok"] = local.ok;
  if (local.ok)
    j["weights"] = weights_json(local.certificate.weights);
  else
    j["direction"] = point_json(local.certificate.direction);
  j["extremes"] = Json::array();
  for (std::size_t e = 0; e < n.priors.extremes.size(); ++e) {
    const SupportSet s = support_of_prior(tree, local.node, n.priors.extremes[e]);
    j["extremes"].push_back({{"index", e},
                             {"aff_dim", affine_hull(s.points).dim},
                             {"ok", origin_in_relative_interior(s.points).interior}});
  }
  return j;
}

Json arbitrage_json(const ScenarioTree& tree, std::size_t node, const Strategy& s) {
  Json j;
  j["node"] = tree.node(node).id;
  j["holdings"] = strategy_json(tree, s);
  Json values = Json::object();
  const auto mask = non_polar_nodes(tree);
  for (auto leaf : tree.leaves())
    if (mask[leaf]) values[tree.node(leaf).id] = to_fraction_string(portfolio_value(tree, s, 0, leaf));
  j["terminal_values"] = std::move(values);
  return j;
}

}  // namespace

Json point_json(const Point& p) {
  Json out = Json::array();
  for (std::size_t i = 0; i < p.dim(); ++i) out.push_back(to_fraction_string(p[i]));
  return out;
}

Json selection_json(const ScenarioTree& tree, const KernelSelection& selection) {
  Json out = Json::object();
  for (auto i : tree.inner_nodes()) out[tree.node(i).id] = weights_json(selection.coefficients.at(i));
  return out;
}

Json strategy_json(const ScenarioTree& tree, const Strategy& strategy) {
  Json out = Json::object();
  for (auto i : tree.inner_nodes())
    if (!strategy.holdings.at(i).is_zero()) out[tree.node(i).id] = point_json(strategy.holdings[i]);
  return out;
}

Json measure_json(const ScenarioTree& tree, const MartingaleMeasure& measure) {
  Json out = Json::object();
  for (std::size_t l = 0; l < tree.leaves().size(); ++l)
    out[tree.node(tree.leaves()[l]).id] = to_fraction_string(measure.leaf_weights[l]);
  return out;
}

Json check_report(const ScenarioTree& tree, const std::string& digest) {
  const GlobalNAReport na = quasi_sure_na(tree);
  const StrongNAReport sna = strong_na(tree);
  const WeakNAReport wna = weak_na(tree);
  Json j = header("check", digest);
  j["verdicts"] = {{"NA", na.holds}, {"sNA", sna.holds}, {"wNA", wna.holds}};
  j["per_node"] = Json::array();
  for (const auto& local : na.per_node) j["per_node"].push_back(local_json(tree, local));
  Json cert = Json::object();
  if (!na.holds) cert["arbitrage"] = arbitrage_json(tree, *na.failing_node, *na.arbitrage);
  cert["sNA_violations"] = Json::array();
  for (const auto& [node, e] : sna.witnesses)
    cert["sNA_violations"].push_back({{"node", tree.node(node).id}, {"extreme", e}});
  if (wna.witness) cert["wNA_selection"] = selection_json(tree, *wna.witness);
  j["certificates"] = std::move(cert);
  return j;
}

Json constants_report(const ScenarioTree& tree, const std::string& digest) {
  const GlobalNAReport na = quasi_sure_na(tree);
  Json j = header("constants", digest);
  j["verdicts"] = {{"NA", na.holds}};
  if (!na.holds) {
    j["failing_node"] = tree.node(*na.failing_node).id;
    return j;
  }
  j["constants"] = Json::array();
  for (const auto& local : na.per_node) {
    const QuantConstants q = quantitative_constants(tree, local.node);
    Json row{{"id", tree.node(local.node).id},
             {"epsilon", q.epsilon},
             {"beta", q.beta},
             {"kappa", q.kappa},
             {"alpha", q.alpha},
             {"exact", q.exact}};
    if (q.epsilon_exact) row["epsilon_exact"] = to_fraction_string(*q.epsilon_exact);
    j["constants"].push_back(std::move(row));
  }
  return j;
}

Json pstar_report(const ScenarioTree& tree, const std::string& digest) {
  const GlobalNAReport na = quasi_sure_na(tree);
  Json j = header("pstar", digest);
  j["verdicts"] = {{"NA", na.holds}};
  if (!na.holds) {
    j["failing_node"] = tree.node(*na.failing_node).id;
    return j;
  }
  const PStarSelection p = construct_pstar(tree);
  j["pstar"] = selection_json(tree, p.selection);
  Json flags = Json::object();
  const auto mask = non_polar_nodes(tree);
  for (auto i : tree.inner_nodes())
    if (mask[i]) flags[tree.node(i).id] = {{"support_matches", bool(p.support_matches[i])}, {"interior", bool(p.interior[i])}};
  j["node_checks"] = std::move(flags);
  j["single_prior_NA"] = single_prior_na(tree, p.selection).holds;
  j["polar_equivalence"] = polar_equivalence(tree, p);
  return j;
}

Json martingale_report(const ScenarioTree& tree, const std::string& digest) {
  const KernelSelection reference = uniform_selection(tree);
  const MartingaleResult m = martingale_measure(tree, reference);
  Json j = header("martingale", digest);
  j["reference"] = "uniform mixture of extremes";
  j["exists"] = m.measure.has_value();
  j["lp_status"] = to_string(m.status);
  if (m.measure) {
    j["min_weight"] = to_fraction_string(m.min_weight);
    j["measure"] = measure_json(tree, *m.measure);
  } else {
    j["certificate"] = weights_json(m.certificate);
  }
  j["ftap_verified"] = verify_ftap(tree);
  return j;
}

Json arbitrage_report(const ScenarioTree& tree, const std::string& digest) {
  const auto found = global_arbitrage_search(tree);
  Json j = header("arbitrage", digest);
  j["arbitrage"] = found.has_value();
  if (found) {
    j["strategy"] = strategy_json(tree, found->strategy);
    j["witness_leaf"] = tree.node(found->leaf).id;
    j["total_gain"] = to_fraction_string(found->objective);
  }
  return j;
}

void check_report_schema(const Json& report) {
  auto require = [&](const char* key, Json::value_t type) {
    if (!report.contains(key)) throw Error(std::string("report lacks '") + key + "'");
    if (report[key].type() != type) throw Error(std::string("report field '") + key + "' has the wrong type");
  };
  require("tool", Json::value_t::object);
  require("command", Json::value_t::string);
  require("input_sha256", Json::value_t::string);
  if (report["input_sha256"].get<std::string>().size() != 64) throw Error("report digest is not a SHA-256");
  if (!report["tool"].contains("version")) throw Error("report lacks the tool version");
  const std::string cmd = report["command"];
  if (cmd == "check") {
    require("verdicts", Json::value_t::object);
    require("per_node", Json::value_t::array);
    require("certificates", Json::value_t::object);
    for (const char* v : {"NA", "sNA", "wNA"})
      if (!report["verdicts"].contains(v) || !report["verdicts"][v].is_boolean())
        throw Error(std::string("report lacks verdict ") + v);
    if (!report["verdicts"]["NA"].get<bool>() && !report["certificates"].contains("arbitrage"))
      throw Error("failing NA verdict without an arbitrage certificate");
  }
}

}  // namespace robustna
