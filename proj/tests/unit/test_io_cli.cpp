#include "robustna/model_io.hpp"
#include "robustna/models.hpp"
#include "robustna/report.hpp"

#include "../support/random_tree.hpp"

#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <sys/wait.h>

using namespace robustna;
namespace fs = std::filesystem;

namespace {

const char* kTiny = R"({
  "d": 1,
  "T": 1,
  "nodes": [
    {"id": "root", "t": 0, "price": ["1"], "children": ["a", "b"],
     "priors": [[["a", "1/2"], ["b", "0.5"]]]},
    {"id": "a", "t": 1, "price": [0], "children": []},
    {"id": "b", "t": 1, "price": ["2/1"], "children": []}
  ]
})";

std::string parse_error_location(std::string_view text) {
  try {
    parse_model(text);
  } catch (const ParseError& e) {
    return e.location();
  }
  return "no error";
}

fs::path scratch_dir() {
  const fs::path dir = fs::temp_directory_path() / ("robustna_cli_" + std::to_string(::getpid()));
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_file(const fs::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  out << text;
}

struct Run {
  int code;
  std::string out;
};

Run run_cli(const std::string& args) {
  const fs::path out = scratch_dir() / "stdout.txt";
  const std::string cmd = std::string(NOARB_BIN) + " " + args + " > " + out.string() + " 2>/dev/null";
  const int status = std::system(cmd.c_str());
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, slurp(out)};
}

fs::path emit_fixture(const std::string& name) {
  const fs::path p = scratch_dir() / (name + ".json");
  write_file(p, write_model(fixture(name).model));
  return p;
}

}  // namespace

TEST_CASE("parse_model") {
  const ModelSpec m = parse_model(kTiny);
  CHECK(m.d == 1);
  CHECK(m.nodes.size() == 3);
  CHECK(m.nodes[0].priors[0][1].weight == ratio(1, 2));
  CHECK(m.nodes[1].price[0] == 0);
  CHECK(m.nodes[2].price[0] == 2);
  CHECK_NOTHROW(ScenarioTree::build(m));
}

TEST_CASE("parse_model error locations") {
  CHECK(parse_error_location("{\n  \"d\": 1,\n  \"T\": \n}") == "4:1");
  std::string s = kTiny;
  CHECK(parse_error_location(std::string(s).replace(s.find("[0]"), 3, "[0.5]")) == "nodes[1].price[0]");
  CHECK(parse_error_location(std::string(s).replace(s.find("\"1/2\""), 5, "\"x\"")) == "nodes[0].priors[0][0][1]");
  CHECK(parse_error_location(std::string(s).replace(s.find("\"T\": 1,"), 7, "")) == "document");
  CHECK(parse_error_location("[]") != "no error");
}

TEST_CASE("write_model round trip") {
  for (const auto& name : fixture_names()) {
    const ModelSpec m = fixture(name).model;
    const std::string text = write_model(m);
    CHECK(parse_model(text) == m);
    CHECK(write_model(parse_model(text)) == text);
  }
  std::mt19937_64 rng(61);
  for (int trial = 0; trial < 50; ++trial) {
    const ModelSpec m = ScenarioTree::build(testing_support::random_model(rng)).to_spec();
    CHECK(parse_model(write_model(m)) == m);
  }
}

TEST_CASE("sha256_hex") {
  CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  CHECK(sha256_hex("") == "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
}

TEST_CASE("reports satisfy the schema") {
  for (const auto& name : fixture_names()) {
    const ScenarioTree t = ScenarioTree::build(fixture(name).model);
    const Json r = check_report(t, sha256_hex(name));
    CHECK_NOTHROW(check_report_schema(r));
    CHECK(r.dump() == check_report(t, sha256_hex(name)).dump());
  }
  Json broken = check_report(ScenarioTree::build(fixture("exex").model), "x");
  broken.erase("verdicts");
  CHECK_THROWS_AS(check_report_schema(broken), Error);
}

TEST_CASE("cli exit codes") {
  const fs::path exex = emit_fixture("exex");
  const fs::path variant = emit_fixture("exex_variant");
  CHECK(run_cli("check " + exex.string()).code == 1);
  CHECK(run_cli("check " + variant.string()).code == 0);
  CHECK(run_cli("arbitrage " + exex.string()).code == 1);
  CHECK(run_cli("arbitrage " + variant.string()).code == 0);
  CHECK(run_cli("pstar " + variant.string()).code == 0);
  CHECK(run_cli("pstar " + exex.string()).code == 1);
  CHECK(run_cli("martingale " + variant.string()).code == 0);
  CHECK(run_cli("constants " + variant.string()).code == 0);

  const fs::path bad = scratch_dir() / "bad.json";
  write_file(bad, "{ not json");
  CHECK(run_cli("check " + bad.string()).code == 2);
  CHECK(run_cli("check " + (scratch_dir() / "missing.json").string()).code == 2);
  CHECK(run_cli("fixture emit nope").code == 2);
}

TEST_CASE("cli json output is deterministic and well formed") {
  const fs::path exex = emit_fixture("exex");
  const Run a = run_cli("check --json " + exex.string());
  const Run b = run_cli("check --json " + exex.string());
  CHECK(a.out == b.out);
  const Json r = Json::parse(a.out);
  CHECK_NOTHROW(check_report_schema(r));
  CHECK(r["input_sha256"] == sha256_hex(slurp(exex)));
  CHECK(r["verdicts"]["NA"] == false);
  CHECK(r["verdicts"]["wNA"] == true);

  const std::string single = "NOARB_THREADS=1 " + std::string(NOARB_BIN) + " check --json " + exex.string() + " > " +
                             (scratch_dir() / "single.txt").string();
  REQUIRE(std::system(single.c_str()) != -1);
  CHECK(slurp(scratch_dir() / "single.txt") == a.out);
}

TEST_CASE("cli generators and fixtures") {
  const fs::path out = scratch_dir() / "bin.json";
  CHECK(run_cli("gen binomial --T 2 -o " + out.string()).code == 0);
  CHECK(run_cli("check " + out.string()).code == 0);
  BinomialSpec spec;
  spec.T = 2;
  CHECK(parse_model(slurp(out)) == gen_binomial(spec).to_spec());

  const fs::path diff = scratch_dir() / "diff.json";
  CHECK(run_cli("gen diffusion --variant lognormal -o " + diff.string()).code == 0);
  CHECK(run_cli("check " + diff.string()).code == 0);

  const Run list = run_cli("fixture list");
  CHECK(list.code == 0);
  for (const auto& name : fixture_names()) CHECK(list.out.find(name) != std::string::npos);
  const Run emitted = run_cli("fixture emit exex_item5");
  CHECK(emitted.out == write_model(fixture("exex_item5").model));
}
