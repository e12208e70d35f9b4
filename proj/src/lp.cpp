#include "robustna/lp.hpp"

#include <limits>
#include <string>

namespace robustna {

std::size_t LinearProgram::add_variable(VariableBounds b, Rational cost) {
  objective.push_back(std::move(cost));
  bounds.push_back(std::move(b));
  for (auto& c : constraints) c.coefficients.resize(objective.size());
  return objective.size() - 1;
}

void LinearProgram::add_constraint(std::vector<Rational> coefficients, Sense sense, Rational rhs) {
  coefficients.resize(num_variables());
  constraints.push_back({std::move(coefficients), sense, std::move(rhs)});
}

const char* to_string(LPStatus status) {
  switch (status) {
    case LPStatus::Optimal: return "optimal";
    case LPStatus::Infeasible: return "infeasible";
    case LPStatus::Unbounded: return "unbounded";
  }
  return "unknown";
}

namespace {

constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();

// Original variable j equals offset + sum(sign * x[column]) over its columns.
struct VariableMap {
  Rational offset;
  std::vector<std::pair<std::size_t, int>> columns;
};

enum class ColumnKind { Structural, Slack, Artificial };

class Tableau {
 public:
  Tableau(std::size_t rows, std::size_t columns)
      : rows_(rows, std::vector<Rational>(columns + 1)), basis_(rows, kNone), cost_(columns + 1) {}

  std::size_t num_rows() const { return rows_.size(); }
  std::size_t num_columns() const { return cost_.size() - 1; }
  Rational& at(std::size_t r, std::size_t c) { return rows_[r][c]; }
  const Rational& at(std::size_t r, std::size_t c) const { return rows_[r][c]; }
  Rational& rhs(std::size_t r) { return rows_[r].back(); }
  const Rational& rhs(std::size_t r) const { return rows_[r].back(); }
  std::size_t basic(std::size_t r) const { return basis_[r]; }
  void set_basic(std::size_t r, std::size_t c) { basis_[r] = c; }

  // Reduced-cost row for maximizing `costs`; last entry holds -objective.
  void price(const std::vector<Rational>& costs) {
    for (std::size_t j = 0; j < num_columns(); ++j) cost_[j] = costs[j];
    cost_.back() = 0;
    for (std::size_t r = 0; r < num_rows(); ++r) {
      const Rational& cb = costs[basis_[r]];
      if (sgn(cb) == 0) continue;
      for (std::size_t j = 0; j <= num_columns(); ++j)
        if (sgn(rows_[r][j]) != 0) cost_[j] -= cb * rows_[r][j];
    }
  }
  const Rational& reduced_cost(std::size_t c) const { return cost_[c]; }
  Rational objective() const { return -cost_.back(); }

  void pivot(std::size_t r, std::size_t c) {
    std::vector<Rational>& prow = rows_[r];
    const Rational inv = 1 / prow[c];
    std::vector<std::size_t> nonzero;
    for (std::size_t j = 0; j < prow.size(); ++j) {
      if (sgn(prow[j]) == 0) continue;
      prow[j] *= inv;
      nonzero.push_back(j);
    }
    auto eliminate = [&](std::vector<Rational>& row) {
      if (sgn(row[c]) == 0) return;
      const Rational factor = row[c];
      for (std::size_t j : nonzero) row[j] -= factor * prow[j];
    };
    for (std::size_t i = 0; i < rows_.size(); ++i)
      if (i != r) eliminate(rows_[i]);
    eliminate(cost_);
    basis_[r] = c;
  }

  // Bland's rule; returns false when the column is unbounded.
  bool choose_leaving(std::size_t c, std::size_t& leaving) const {
    leaving = kNone;
    Rational best;
    for (std::size_t r = 0; r < num_rows(); ++r) {
      if (sgn(rows_[r][c]) <= 0) continue;
      Rational ratio = rows_[r].back() / rows_[r][c];
      if (leaving == kNone || ratio < best || (ratio == best && basis_[r] < basis_[leaving])) {
        best = ratio;
        leaving = r;
      }
    }
    return leaving != kNone;
  }

 private:
  std::vector<std::vector<Rational>> rows_;
  std::vector<std::size_t> basis_;
  std::vector<Rational> cost_;
};

}  // namespace

LPResult solve_lp(const LinearProgram& program) {
  const std::size_t n = program.num_variables();
  if (program.bounds.size() != n) throw Error("linear program: bounds/objective size mismatch");
  for (std::size_t i = 0; i < program.constraints.size(); ++i)
    if (program.constraints[i].coefficients.size() != n)
      throw Error("linear program: constraint " + std::to_string(i) + " has " +
                  std::to_string(program.constraints[i].coefficients.size()) +
                  " coefficients, expected " + std::to_string(n));

  // Map every original variable onto non-negative standardized columns.
  std::vector<VariableMap> vars(n);
  std::size_t columns = 0;
  struct UpperRow {
    std::size_t column;
    Rational limit;
  };
  std::vector<UpperRow> upper_rows;
  for (std::size_t j = 0; j < n; ++j) {
    const auto& b = program.bounds[j];
    if (b.lower && b.upper && *b.upper < *b.lower)
      throw Error("linear program: variable " + std::to_string(j) + " has empty bounds");
    if (b.lower) {
      vars[j].offset = *b.lower;
      vars[j].columns.push_back({columns, 1});
      if (b.upper) upper_rows.push_back({columns, *b.upper - *b.lower});
      ++columns;
    } else if (b.upper) {
      vars[j].offset = *b.upper;
      vars[j].columns.push_back({columns++, -1});
    } else {
      vars[j].columns.push_back({columns++, 1});
      vars[j].columns.push_back({columns++, -1});
    }
  }
  const std::size_t structural = columns;

  // Rows in standardized form: coefficients over structural columns, sense, rhs.
  struct Row {
    std::vector<Rational> a;
    Sense sense;
    Rational b;
  };
  std::vector<Row> rows;
  rows.reserve(program.constraints.size() + upper_rows.size());
  for (const auto& con : program.constraints) {
    Row row{std::vector<Rational>(structural), con.sense, con.rhs};
    for (std::size_t j = 0; j < n; ++j) {
      if (sgn(con.coefficients[j]) == 0) continue;
      row.b -= con.coefficients[j] * vars[j].offset;
      for (auto [col, sign] : vars[j].columns)
        row.a[col] += sign > 0 ? con.coefficients[j] : Rational(-con.coefficients[j]);
    }
    rows.push_back(std::move(row));
  }
  for (const auto& ur : upper_rows) {
    Row row{std::vector<Rational>(structural), Sense::LessEqual, ur.limit};
    row.a[ur.column] = 1;
    rows.push_back(std::move(row));
  }
  const std::size_t m = rows.size();

  // Column layout: structural | slacks (one per inequality row) | artificials.
  std::vector<std::size_t> slack_of(m, kNone);
  for (std::size_t i = 0; i < m; ++i)
    if (rows[i].sense != Sense::Equal) slack_of[i] = columns++;
  std::vector<int> flip(m, 1);
  std::vector<bool> needs_artificial(m, false);
  std::vector<std::size_t> artificial_of(m, kNone);
  for (std::size_t i = 0; i < m; ++i) {
    if (sgn(rows[i].b) < 0) flip[i] = -1;
    // A slack whose normalized coefficient is +1 can start in the basis.
    const bool slack_usable =
        slack_of[i] != kNone && ((rows[i].sense == Sense::LessEqual) == (flip[i] > 0));
    needs_artificial[i] = !slack_usable;
  }
  for (std::size_t i = 0; i < m; ++i)
    if (needs_artificial[i]) artificial_of[i] = columns++;
  const std::size_t total = columns;

  std::vector<ColumnKind> kind(total, ColumnKind::Structural);
  for (std::size_t i = 0; i < m; ++i) {
    if (slack_of[i] != kNone) kind[slack_of[i]] = ColumnKind::Slack;
    if (artificial_of[i] != kNone) kind[artificial_of[i]] = ColumnKind::Artificial;
  }

  Tableau tab(m, total);
  std::vector<std::size_t> unit_column(m);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t c = 0; c < structural; ++c)
      if (sgn(rows[i].a[c]) != 0) tab.at(i, c) = flip[i] > 0 ? rows[i].a[c] : Rational(-rows[i].a[c]);
    if (slack_of[i] != kNone) tab.at(i, slack_of[i]) = (rows[i].sense == Sense::LessEqual ? 1 : -1) * flip[i];
    if (artificial_of[i] != kNone) tab.at(i, artificial_of[i]) = 1;
    tab.rhs(i) = flip[i] > 0 ? rows[i].b : Rational(-rows[i].b);
    unit_column[i] = artificial_of[i] != kNone ? artificial_of[i] : slack_of[i];
    tab.set_basic(i, unit_column[i]);
  }

  LPResult result;
  auto run = [&](const std::vector<Rational>& costs, bool allow_artificial, std::size_t& unbounded_col) {
    tab.price(costs);
    for (;;) {
      std::size_t entering = kNone;
      for (std::size_t c = 0; c < total; ++c) {
        if (!allow_artificial && kind[c] == ColumnKind::Artificial) continue;
        if (sgn(tab.reduced_cost(c)) > 0) {
          entering = c;
          break;
        }
      }
      if (entering == kNone) return true;
      std::size_t leaving;
      if (!tab.choose_leaving(entering, leaving)) {
        unbounded_col = entering;
        return false;
      }
      tab.pivot(leaving, entering);
      ++result.pivots;
    }
  };

  // Row multipliers in original row order: y_i = flip_i * (c_unit - reduced_cost(unit)).
  auto row_duals = [&](const std::vector<Rational>& costs) {
    std::vector<Rational> y(m);
    for (std::size_t i = 0; i < m; ++i) {
      Rational v = costs[unit_column[i]] - tab.reduced_cost(unit_column[i]);
      y[i] = flip[i] > 0 ? v : Rational(-v);
    }
    return y;
  };

  std::size_t unbounded_col = kNone;
  bool any_artificial = false;
  for (std::size_t i = 0; i < m; ++i) any_artificial = any_artificial || needs_artificial[i];
  if (any_artificial) {
    std::vector<Rational> phase1(total);
    for (std::size_t c = 0; c < total; ++c)
      if (kind[c] == ColumnKind::Artificial) phase1[c] = -1;
    run(phase1, true, unbounded_col);  // bounded below by construction
    if (sgn(tab.objective()) < 0) {
      result.status = LPStatus::Infeasible;
      std::vector<Rational> y = row_duals(phase1);
      for (auto& v : y) v = -v;
      result.certificate = std::move(y);
      return result;
    }
    // Drive zero-valued artificials out of the basis where possible.
    for (std::size_t r = 0; r < m; ++r) {
      if (kind[tab.basic(r)] != ColumnKind::Artificial) continue;
      for (std::size_t c = 0; c < total; ++c) {
        if (kind[c] == ColumnKind::Artificial || sgn(tab.at(r, c)) == 0) continue;
        tab.pivot(r, c);
        ++result.pivots;
        break;
      }
    }
  }

  std::vector<Rational> phase2(total);
  Rational constant;
  for (std::size_t j = 0; j < n; ++j) {
    if (sgn(program.objective[j]) == 0) continue;
    constant += program.objective[j] * vars[j].offset;
    for (auto [col, sign] : vars[j].columns)
      phase2[col] += sign > 0 ? program.objective[j] : Rational(-program.objective[j]);
  }
  if (!run(phase2, false, unbounded_col)) {
    result.status = LPStatus::Unbounded;
    std::vector<Rational> ray_std(total);
    ray_std[unbounded_col] = 1;
    for (std::size_t r = 0; r < m; ++r) ray_std[tab.basic(r)] = -tab.at(r, unbounded_col);
    result.certificate.assign(n, Rational(0));
    for (std::size_t j = 0; j < n; ++j)
      for (auto [col, sign] : vars[j].columns) result.certificate[j] += sign * ray_std[col];
    return result;
  }

  std::vector<Rational> x_std(total);
  for (std::size_t r = 0; r < m; ++r) x_std[tab.basic(r)] = tab.rhs(r);
  result.status = LPStatus::Optimal;
  result.solution.resize(n);
  for (std::size_t j = 0; j < n; ++j) {
    result.solution[j] = vars[j].offset;
    for (auto [col, sign] : vars[j].columns) result.solution[j] += sign * x_std[col];
  }
  result.objective_value = tab.objective() + constant;
  result.certificate = row_duals(phase2);
  return result;
}

}  // namespace robustna
