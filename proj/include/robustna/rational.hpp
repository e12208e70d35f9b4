#pragma once

#include <gmpxx.h>

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace robustna {

/// Exact rational scalar used for every price, weight and LP coefficient.
using Rational = mpq_class;

/// Library-wide error type; every violated precondition throws this.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Parses "num/den", an integer, or a decimal literal such as "-0.25" or
/// "1.5e-3" into an exact rational. Throws Error on malformed input.
Rational parse_rational(std::string_view text);

/// Canonical "num/den" form (den omitted is never used: "3" prints as "3/1").
std::string to_fraction_string(const Rational& q);

/// num/den in lowest terms. Use instead of the two-argument constructor,
/// which leaves the fraction uncanonicalized.
inline Rational ratio(long num, long den) {
  Rational q(num, den);
  q.canonicalize();
  return q;
}

inline double to_double(const Rational& q) { return q.get_d(); }

/// Exact square root when both numerator and denominator are perfect squares.
bool exact_sqrt(const Rational& q, Rational& root);

}  // namespace robustna
