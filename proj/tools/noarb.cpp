// noarb: command-line front end for the robust no-arbitrage checks.

#include "robustna/model_io.hpp"
#include "robustna/models.hpp"
#include "robustna/report.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

using namespace robustna;

namespace {

constexpr int kOk = 0;
constexpr int kFails = 1;
constexpr int kInputError = 2;

struct Loaded {
  ScenarioTree tree;
  std::string digest;
};

Loaded load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  const std::string text = buf.str();
  const ModelSpec spec = parse_model(text);
  Loaded out{ScenarioTree::build(spec), sha256_hex(text)};
  for (const auto& w : validate(out.tree)) std::cerr << path << ": " << to_string(w) << "\n";
  return out;
}

void emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw Error("cannot write '" + out_path + "'");
  out << text;
}

Interval parse_interval(const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos) {
    const Rational x = parse_rational(text);
    return {x, x};
  }
  return {parse_rational(text.substr(0, colon)), parse_rational(text.substr(colon + 1))};
}

std::string show(bool holds) { return holds ? "holds" : "fails"; }

std::string show_point(const Json& p) {
  std::string s = "(";
  for (std::size_t i = 0; i < p.size(); ++i) s += (i ? ", " : "") + p[i].get<std::string>();
  return s + ")";
}

int print_check(const Json& r) {
  const auto& v = r["verdicts"];
  std::cout << "NA:  " << show(v["NA"]) << "\nsNA: " << show(v["sNA"]) << "\nwNA: " << show(v["wNA"]) << "\n";
  for (const auto& n : r["per_node"]) {
    std::cout << "  node " << n["id"].get<std::string>() << " (t=" << n["t"].get<int>()
              << "): aff_dim=" << n["aff_dim"].get<std::size_t>() << (n["ok"].get<bool>() ? " ok" : " ARBITRAGE");
    if (n.contains("direction")) std::cout << " h=" << show_point(n["direction"]);
    std::cout << "\n";
  }
  const auto& c = r["certificates"];
  if (c.contains("arbitrage")) {
    std::cout << "arbitrage at node " << c["arbitrage"]["node"].get<std::string>() << "\n";
    for (const auto& [leaf, value] : c["arbitrage"]["terminal_values"].items())
      std::cout << "  V_T(" << leaf << ") = " << value.get<std::string>() << "\n";
  }
  for (const auto& w : c["sNA_violations"])
    std::cout << "sNA violated by extreme " << w["extreme"].get<std::size_t>() << " at node "
              << w["node"].get<std::string>() << "\n";
  return v["NA"].get<bool>() ? kOk : kFails;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Robust no-arbitrage checks for finite scenario trees"};
  app.set_version_flag("--version", tool_version());
  app.require_subcommand(1);
  bool json = false;
  app.add_flag("--json", json, "Print machine-readable JSON");

  std::string model_path;
  auto* check = app.add_subcommand("check", "Decide NA, sNA and wNA");
  auto* constants = app.add_subcommand("constants", "Quantitative constants per node");
  auto* pstar = app.add_subcommand("pstar", "Construct the dominating arbitrage-free prior");
  auto* martingale = app.add_subcommand("martingale", "Equivalent martingale measure and FTAP check");
  auto* arbitrage = app.add_subcommand("arbitrage", "Global LP arbitrage search");
  for (auto* sub : {check, constants, pstar, martingale, arbitrage}) {
    sub->add_option("model", model_path, "Model file")->required();
    sub->add_flag("--json", json, "Print machine-readable JSON");
  }

  std::string out_path;
  auto* gen = app.add_subcommand("gen", "Generate a model file");
  gen->require_subcommand(1);
  auto* gen_bin = gen->add_subcommand("binomial", "Robust binomial model");
  int T = 1;
  std::string pi = "3/10:3/5", u = "11/10:13/10", dn = "7/10:9/10", scale_n = "2", scale_m = "2", sna_a;
  std::size_t grid = 2;
  std::optional<std::size_t> grid_pi, grid_u, grid_d;
  gen_bin->add_option("--T", T, "Number of periods");
  gen_bin->add_option("--pi", pi, "Up-probability range lo:hi");
  gen_bin->add_option("--u", u, "Up-factor range lo:hi");
  gen_bin->add_option("--dn", dn, "Down-factor range lo:hi");
  gen_bin->add_option("--grid", grid, "Grid points per range");
  gen_bin->add_option("--grid-pi", grid_pi);
  gen_bin->add_option("--grid-u", grid_u);
  gen_bin->add_option("--grid-d", grid_d);
  gen_bin->add_option("--N", scale_n);
  gen_bin->add_option("--M", scale_m);
  gen_bin->add_option("--sna-fail-a", sna_a, "Add an up-factor a < 1 so that sNA fails");
  gen_bin->add_option("-o,--output", out_path);

  auto* gen_diff = gen->add_subcommand("diffusion", "Discretized one-dimensional diffusion");
  int dT = 1;
  std::string r = "0", sigma = "1", spacing = "1/2", y0 = "1", variant = "normal";
  std::size_t zgrid = 21;
  std::vector<std::string> atoms{"2"};
  gen_diff->add_option("--T", dT);
  gen_diff->add_option("--r", r, "Drift bound");
  gen_diff->add_option("--sigma", sigma, "Volatility");
  gen_diff->add_option("--grid", zgrid, "Odd Z grid size, at least 21");
  gen_diff->add_option("--spacing", spacing, "Z grid spacing");
  gen_diff->add_option("--atoms", atoms, "q_x atoms")->delimiter(',');
  gen_diff->add_option("--y0", y0);
  gen_diff->add_option("--variant", variant)->check(CLI::IsMember({"normal", "lognormal"}));
  gen_diff->add_option("-o,--output", out_path);

  auto* fix = app.add_subcommand("fixture", "Built-in counterexample models");
  fix->require_subcommand(1);
  auto* fix_list = fix->add_subcommand("list", "List fixture names");
  auto* fix_emit = fix->add_subcommand("emit", "Write a fixture model file");
  std::string fixture_name;
  fix_emit->add_option("name", fixture_name)->required();
  fix_emit->add_option("-o,--output", out_path);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kInputError;
  }

  try {
    if (gen_bin->parsed()) {
      BinomialSpec spec;
      spec.T = T;
      spec.pi = {parse_interval(pi)};
      spec.u = {parse_interval(u)};
      spec.d = {parse_interval(dn)};
      spec.grid_pi = grid_pi.value_or(grid);
      spec.grid_u = grid_u.value_or(grid);
      spec.grid_d = grid_d.value_or(grid);
      spec.N = parse_rational(scale_n);
      spec.M = parse_rational(scale_m);
      const ScenarioTree tree =
          sna_a.empty() ? gen_binomial(spec) : gen_binomial_sna_fail(spec, parse_rational(sna_a)).tree;
      emit(write_model(tree.to_spec()), out_path);
      return kOk;
    }
    if (gen_diff->parsed()) {
      DiffusionSpec spec;
      spec.T = dT;
      spec.r = parse_rational(r);
      spec.sigma = parse_rational(sigma);
      spec.grid = zgrid;
      spec.spacing = parse_rational(spacing);
      spec.y0 = parse_rational(y0);
      spec.atoms.clear();
      for (const auto& a : atoms) spec.atoms.push_back(parse_rational(a));
      const auto v = variant == "normal" ? DiffusionVariant::Normal : DiffusionVariant::Lognormal;
      emit(write_model(gen_diffusion(spec, v).to_spec()), out_path);
      return kOk;
    }
    if (fix_list->parsed()) {
      for (const auto& n : fixture_names()) std::cout << n << "\n";
      return kOk;
    }
    if (fix_emit->parsed()) {
      emit(write_model(fixture(fixture_name).model), out_path);
      return kOk;
    }

    const Loaded m = load(model_path);
    if (check->parsed()) {
      const Json rep = check_report(m.tree, m.digest);
      if (json) {
        std::cout << rep.dump(2) << "\n";
        return rep["verdicts"]["NA"].get<bool>() ? kOk : kFails;
      }
      return print_check(rep);
    }
    if (constants->parsed()) {
      const Json rep = constants_report(m.tree, m.digest);
      const bool holds = rep["verdicts"]["NA"];
      if (json) {
        std::cout << rep.dump(2) << "\n";
      } else if (!holds) {
        std::cout << "NA fails at node " << rep["failing_node"].get<std::string>() << "\n";
      } else {
        std::cout << "node\tepsilon\tbeta\tkappa\talpha\texact\n";
        for (const auto& row : rep["constants"])
          std::cout << row["id"].get<std::string>() << '\t' << row["epsilon"].get<double>() << '\t'
                    << row["beta"].get<double>() << '\t' << row["kappa"].get<double>() << '\t'
                    << row["alpha"].get<double>() << '\t' << (row["exact"].get<bool>() ? "yes" : "no") << "\n";
      }
      return holds ? kOk : kFails;
    }
    if (pstar->parsed()) {
      const Json rep = pstar_report(m.tree, m.digest);
      const bool holds = rep["verdicts"]["NA"];
      if (json) {
        std::cout << rep.dump(2) << "\n";
      } else if (!holds) {
        std::cout << "no P* exists: NA fails at node " << rep["failing_node"].get<std::string>() << "\n";
      } else {
        for (const auto& [id, c] : rep["pstar"].items()) {
          std::cout << id << ":";
          for (const auto& x : c) std::cout << ' ' << x.get<std::string>();
          std::cout << "\n";
        }
        std::cout << "single-prior NA: " << show(rep["single_prior_NA"]) << "\npolar sets agree: "
                  << (rep["polar_equivalence"].get<bool>() ? "yes" : "no") << "\n";
      }
      return holds ? kOk : kFails;
    }
    if (martingale->parsed()) {
      const Json rep = martingale_report(m.tree, m.digest);
      const bool exists = rep["exists"];
      if (json) {
        std::cout << rep.dump(2) << "\n";
      } else if (!exists) {
        std::cout << "no equivalent martingale measure (" << rep["lp_status"].get<std::string>() << ")\n";
      } else {
        for (const auto& [leaf, w] : rep["measure"].items()) std::cout << leaf << '\t' << w.get<std::string>() << "\n";
      }
      return exists ? kOk : kFails;
    }
    if (arbitrage->parsed()) {
      const Json rep = arbitrage_report(m.tree, m.digest);
      const bool found = rep["arbitrage"];
      if (json) {
        std::cout << rep.dump(2) << "\n";
      } else if (!found) {
        std::cout << "no arbitrage\n";
      } else {
        std::cout << "arbitrage, positive at leaf " << rep["witness_leaf"].get<std::string>() << "\n";
        for (const auto& [id, h] : rep["strategy"].items()) std::cout << "  " << id << ": " << show_point(h) << "\n";
      }
      return found ? kFails : kOk;
    }
  } catch (const ParseError& e) {
    std::cerr << "noarb: " << model_path << ":" << e.what() << "\n";
    return kInputError;
  } catch (const std::exception& e) {
    std::cerr << "noarb: " << e.what() << "\n";
    return kInputError;
  }
  return kInputError;
}
