#pragma once

#include "robustna/rational.hpp"

#include <cstddef>
#include <optional>
#include <vector>

namespace robustna {

enum class Sense { LessEqual, GreaterEqual, Equal };

struct Constraint {
  std::vector<Rational> coefficients;
  Sense sense = Sense::LessEqual;
  Rational rhs;
};

/// Bounds of one decision variable; an empty optional means unbounded on that side.
struct VariableBounds {
  std::optional<Rational> lower = Rational(0);
  std::optional<Rational> upper;
};

/// maximize objective·x subject to constraints and per-variable bounds.
struct LinearProgram {
  std::vector<Rational> objective;
  std::vector<VariableBounds> bounds;
  std::vector<Constraint> constraints;

  std::size_t add_variable(VariableBounds b = {}, Rational cost = 0);
  void add_constraint(std::vector<Rational> coefficients, Sense sense, Rational rhs);
  std::size_t num_variables() const { return objective.size(); }
};

enum class LPStatus { Optimal, Infeasible, Unbounded };

const char* to_string(LPStatus status);

/// Outcome of an exact simplex solve.
///
/// `certificate` depends on the status. Rows are indexed as the program's
/// constraints followed by one row per finite upper bound (in variable order,
/// for variables with a finite lower bound) :
///  - Optimal: dual multipliers y with objective == y·rhs of the standardized rows.
///  - Infeasible: Farkas multipliers z (z_i <= 0 on <= rows, z_i >= 0 on >= rows)
///    whose row combination has non-positive coefficients on every
///    non-negative standardized column and z·rhs > 0.
///  - Unbounded: an improving ray in the original variable space.
struct LPResult {
  LPStatus status = LPStatus::Infeasible;
  std::vector<Rational> solution;
  Rational objective_value;
  std::vector<Rational> certificate;
  std::size_t pivots = 0;
};

/// Two-phase primal simplex over exact rationals with Bland's rule
/// (lowest-index entering column, lowest-index leaving basic variable on ties).
LPResult solve_lp(const LinearProgram& program);

}  // namespace robustna
