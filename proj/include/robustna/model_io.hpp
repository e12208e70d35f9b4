#pragma once

#include "robustna/market.hpp"

#include <string>
#include <string_view>

namespace robustna {

/// Input error carrying a location: "line:column" for syntax errors, a field
/// path such as "nodes[2].priors[0][1]" otherwise.
class ParseError : public Error {
 public:
  ParseError(std::string location, const std::string& message)
      : Error(location + ": " + message), location_(std::move(location)) {}
  const std::string& location() const { return location_; }

 private:
  std::string location_;
};

/// Reads a JSON model document. Prices and weights are "num/den" or decimal
/// strings (integers may also be JSON numbers).
ModelSpec parse_model(std::string_view text);

/// Writes the model document; rationals as "num/den".
std::string write_model(const ModelSpec& spec);

/// Lowercase hex SHA-256 of `bytes`.
std::string sha256_hex(std::string_view bytes);

}  // namespace robustna
