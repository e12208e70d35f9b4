#include "robustna/model_io.hpp"

#include <nlohmann/json.hpp>
#include <openssl/evp.h>

#include <cstdio>

namespace robustna {

using nlohmann::ordered_json;

namespace {

std::string line_column(std::string_view text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return std::to_string(line) + ":" + std::to_string(col);
}

const ordered_json& field(const ordered_json& obj, const char* name, const std::string& where) {
  if (!obj.is_object()) throw ParseError(where, "expected an object");
  const auto it = obj.find(name);
  if (it == obj.end()) throw ParseError(where, std::string("missing field '") + name + "'");
  return *it;
}

const ordered_json& array_at(const ordered_json& v, const std::string& where) {
  if (!v.is_array()) throw ParseError(where, "expected an array");
  return v;
}

std::string string_at(const ordered_json& v, const std::string& where) {
  if (!v.is_string()) throw ParseError(where, "expected a string");
  return v.get<std::string>();
}

long long integer_at(const ordered_json& v, const std::string& where) {
  if (!v.is_number_integer()) throw ParseError(where, "expected an integer");
  return v.get<long long>();
}

Rational rational_at(const ordered_json& v, const std::string& where) {
  if (v.is_number_integer()) return Rational(std::to_string(v.get<long long>()));
  if (v.is_number_float()) throw ParseError(where, "non-integer numbers must be quoted to stay exact");
  if (!v.is_string()) throw ParseError(where, "expected a number string");
  try {
    return parse_rational(v.get<std::string>());
  } catch (const Error& e) {
    throw ParseError(where, e.what());
  }
}

}  // namespace

ModelSpec parse_model(std::string_view text) {
  ordered_json doc;
  try {
    doc = ordered_json::parse(text.begin(), text.end());
  } catch (const ordered_json::parse_error& e) {
    const std::string msg = e.what();
    const auto colon = msg.find(": ");
    throw ParseError(line_column(text, e.byte == 0 ? 0 : e.byte - 1),
                     colon == std::string::npos ? msg : msg.substr(colon + 2));
  }
  ModelSpec spec;
  const long long d = integer_at(field(doc, "d", "document"), "d");
  const long long T = integer_at(field(doc, "T", "document"), "T");
  if (d < 1) throw ParseError("d", "need d >= 1");
  if (T < 1) throw ParseError("T", "need T >= 1");
  spec.d = static_cast<std::size_t>(d);
  spec.T = static_cast<int>(T);
  const auto& nodes = array_at(field(doc, "nodes", "document"), "nodes");
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const std::string at = "nodes[" + std::to_string(i) + "]";
    const auto& n = nodes[i];
    NodeSpec node;
    node.id = string_at(field(n, "id", at), at + ".id");
    node.t = static_cast<int>(integer_at(field(n, "t", at), at + ".t"));
    const auto& price = array_at(field(n, "price", at), at + ".price");
    for (std::size_t k = 0; k < price.size(); ++k)
      node.price.push_back(rational_at(price[k], at + ".price[" + std::to_string(k) + "]"));
    if (n.contains("children")) {
      const auto& children = array_at(n["children"], at + ".children");
      for (std::size_t k = 0; k < children.size(); ++k)
        node.children.push_back(string_at(children[k], at + ".children[" + std::to_string(k) + "]"));
    }
    if (n.contains("priors")) {
      const auto& priors = array_at(n["priors"], at + ".priors");
      for (std::size_t p = 0; p < priors.size(); ++p) {
        const std::string pat = at + ".priors[" + std::to_string(p) + "]";
        std::vector<PriorEntry> prior;
        for (std::size_t k = 0; k < array_at(priors[p], pat).size(); ++k) {
          const std::string eat = pat + "[" + std::to_string(k) + "]";
          const auto& entry = array_at(priors[p][k], eat);
          if (entry.size() != 2) throw ParseError(eat, "expected [child_id, weight]");
          prior.push_back({string_at(entry[0], eat + "[0]"), rational_at(entry[1], eat + "[1]")});
        }
        node.priors.push_back(std::move(prior));
      }
    }
    spec.nodes.push_back(std::move(node));
  }
  return spec;
}

std::string write_model(const ModelSpec& spec) {
  ordered_json doc;
  doc["d"] = spec.d;
  doc["T"] = spec.T;
  doc["nodes"] = ordered_json::array();
  for (const auto& n : spec.nodes) {
    ordered_json node;
    node["id"] = n.id;
    node["t"] = n.t;
    node["price"] = ordered_json::array();
    for (const auto& p : n.price) node["price"].push_back(to_fraction_string(p));
    node["children"] = n.children;
    if (!n.priors.empty()) {
      node["priors"] = ordered_json::array();
      for (const auto& prior : n.priors) {
        ordered_json entries = ordered_json::array();
        for (const auto& e : prior) entries.push_back({e.child, to_fraction_string(e.weight)});
        node["priors"].push_back(std::move(entries));
      }
    }
    doc["nodes"].push_back(std::move(node));
  }
  return doc.dump(2) + "\n";
}

std::string sha256_hex(std::string_view bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int size = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest, &size, EVP_sha256(), nullptr) != 1)
    throw Error("sha256 failed");
  std::string hex;
  char buf[3];
  for (unsigned int i = 0; i < size; ++i) {
    std::snprintf(buf, sizeof buf, "%02x", digest[i]);
    hex += buf;
  }
  return hex;
}

}  // namespace robustna
