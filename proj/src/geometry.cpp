#include "robustna/geometry.hpp"

#include "robustna/lp.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace robustna {

bool Point::is_zero() const {
  return std::all_of(coords_.begin(), coords_.end(), [](const Rational& q) { return sgn(q) == 0; });
}

std::vector<double> Point::to_doubles() const {
  std::vector<double> out;
  out.reserve(coords_.size());
  for (const auto& q : coords_) out.push_back(q.get_d());
  return out;
}

Point& Point::operator+=(const Point& other) {
  if (other.dim() != dim()) throw Error("point dimension mismatch");
  for (std::size_t i = 0; i < dim(); ++i) coords_[i] += other.coords_[i];
  return *this;
}

Point& Point::operator-=(const Point& other) {
  if (other.dim() != dim()) throw Error("point dimension mismatch");
  for (std::size_t i = 0; i < dim(); ++i) coords_[i] -= other.coords_[i];
  return *this;
}

Point& Point::operator*=(const Rational& s) {
  for (auto& q : coords_) q *= s;
  return *this;
}

Rational dot(const Point& a, const Point& b) {
  if (a.dim() != b.dim()) throw Error("point dimension mismatch");
  Rational s;
  for (std::size_t i = 0; i < a.dim(); ++i) s += a[i] * b[i];
  return s;
}

std::string to_string(const Point& p) {
  std::ostringstream os;
  os << '(';
  for (std::size_t i = 0; i < p.dim(); ++i) os << (i ? ", " : "") << to_fraction_string(p[i]);
  os << ')';
  return os.str();
}

PointSet::PointSet(std::vector<Point> points) {
  for (auto& p : points) insert(p);
}

std::size_t PointSet::insert(const Point& p) {
  if (!points_.empty() && p.dim() != dim()) throw Error("point dimension mismatch in point set");
  for (std::size_t i = 0; i < points_.size(); ++i)
    if (points_[i] == p) return i;
  points_.push_back(p);
  return points_.size() - 1;
}

bool PointSet::contains(const Point& p) const {
  return std::find(points_.begin(), points_.end(), p) != points_.end();
}

bool PointSet::subset_of(const PointSet& other) const {
  return std::all_of(points_.begin(), points_.end(), [&](const Point& p) { return other.contains(p); });
}

bool PointSet::same_points(const PointSet& other) const {
  return size() == other.size() && subset_of(other);
}

PointSet scaled(const PointSet& ps, const Rational& factor) {
  PointSet out;
  for (const auto& p : ps) out.insert(factor * p);
  return out;
}

namespace {

using Matrix = std::vector<std::vector<Rational>>;

// In-place reduced row-echelon form; returns pivot columns, drops zero rows.
std::vector<std::size_t> rref(Matrix& rows, std::size_t columns) {
  std::vector<std::size_t> pivots;
  std::size_t r = 0;
  for (std::size_t c = 0; c < columns && r < rows.size(); ++c) {
    std::size_t p = r;
    while (p < rows.size() && sgn(rows[p][c]) == 0) ++p;
    if (p == rows.size()) continue;
    std::swap(rows[r], rows[p]);
    const Rational inv = 1 / rows[r][c];
    for (auto& v : rows[r]) v *= inv;
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (i == r || sgn(rows[i][c]) == 0) continue;
      const Rational f = rows[i][c];
      for (std::size_t j = 0; j < columns; ++j) rows[i][j] -= f * rows[r][j];
    }
    pivots.push_back(c);
    ++r;
  }
  rows.resize(r);
  return pivots;
}

std::vector<Point> row_space_basis(const std::vector<Point>& vectors, std::size_t d) {
  Matrix rows;
  rows.reserve(vectors.size());
  for (const auto& v : vectors) rows.push_back(v.coords());
  rref(rows, d);
  std::vector<Point> basis;
  basis.reserve(rows.size());
  for (auto& r : rows) basis.emplace_back(std::move(r));
  return basis;
}

// Signed comparison of margins: returns true when a < b.
bool margin_less(const FacetMargin& a, const FacetMargin& b) {
  if (a.sign != b.sign) return a.sign < b.sign;
  if (a.sign > 0) return a.squared < b.squared;
  if (a.sign < 0) return a.squared > b.squared;
  return false;
}

}  // namespace

std::vector<std::vector<Rational>> null_space(std::vector<std::vector<Rational>> rows, std::size_t columns) {
  const auto pivots = rref(rows, columns);
  std::vector<bool> is_pivot(columns, false);
  for (auto c : pivots) is_pivot[c] = true;
  std::vector<std::vector<Rational>> basis;
  for (std::size_t free = 0; free < columns; ++free) {
    if (is_pivot[free]) continue;
    std::vector<Rational> v(columns);
    v[free] = 1;
    for (std::size_t r = 0; r < pivots.size(); ++r) v[pivots[r]] = -rows[r][free];
    basis.push_back(std::move(v));
  }
  return basis;
}

std::vector<Point> linear_span_basis(const PointSet& ps) {
  return row_space_basis(ps.points(), ps.dim());
}

AffineHull affine_hull(const PointSet& ps) {
  if (ps.empty()) throw Error("empty point set");
  AffineHull hull;
  hull.base = ps[0];
  std::vector<Point> differences;
  for (std::size_t i = 1; i < ps.size(); ++i) differences.push_back(ps[i] - ps[0]);
  hull.basis = row_space_basis(differences, ps.dim());
  hull.dim = hull.basis.size();
  return hull;
}

InteriorCertificate origin_in_relative_interior(const PointSet& ps) {
  if (ps.empty()) throw Error("empty point set");
  const std::size_t m = ps.size();
  const std::size_t d = ps.dim();

  // max t  s.t.  sum(l_i p_i) = 0, sum(l_i) = 1, l_i >= t, 0 <= t <= 1.
  LinearProgram lp;
  for (std::size_t i = 0; i < m; ++i) lp.add_variable();
  const std::size_t t = lp.add_variable({Rational(0), Rational(1)}, Rational(1));
  for (std::size_t k = 0; k < d; ++k) {
    std::vector<Rational> row(m + 1);
    for (std::size_t i = 0; i < m; ++i) row[i] = ps[i][k];
    lp.add_constraint(std::move(row), Sense::Equal, 0);
  }
  {
    std::vector<Rational> row(m + 1, Rational(1));
    row[t] = 0;
    lp.add_constraint(std::move(row), Sense::Equal, 1);
  }
  for (std::size_t i = 0; i < m; ++i) {
    std::vector<Rational> row(m + 1);
    row[i] = 1;
    row[t] = -1;
    lp.add_constraint(std::move(row), Sense::GreaterEqual, 0);
  }
  const LPResult weights_lp = solve_lp(lp);

  InteriorCertificate cert;
  if (weights_lp.status == LPStatus::Optimal && sgn(weights_lp.objective_value) > 0) {
    cert.interior = true;
    cert.weights.assign(weights_lp.solution.begin(), weights_lp.solution.begin() + static_cast<long>(m));
    return cert;
  }

  // Separating direction h = sum c_j b_j in the span:
  // max sum_i h.p_i  s.t.  h.p_i >= 0, -1 <= c_j <= 1.
  const std::vector<Point> basis = linear_span_basis(ps);
  const std::size_t k = basis.size();
  LinearProgram sep;
  for (std::size_t j = 0; j < k; ++j) sep.add_variable({Rational(-1), Rational(1)});
  for (std::size_t i = 0; i < m; ++i) {
    std::vector<Rational> row(k);
    for (std::size_t j = 0; j < k; ++j) {
      row[j] = dot(basis[j], ps[i]);
      sep.objective[j] += row[j];
    }
    sep.add_constraint(std::move(row), Sense::GreaterEqual, 0);
  }
  const LPResult dir_lp = solve_lp(sep);
  if (dir_lp.status != LPStatus::Optimal || sgn(dir_lp.objective_value) <= 0)
    throw Error("internal: relative-interior dichotomy produced no certificate");
  cert.direction = Point(d);
  for (std::size_t j = 0; j < k; ++j) cert.direction += dir_lp.solution[j] * basis[j];
  return cert;
}

double FacetMargin::value() const {
  return sign * std::sqrt(squared.get_d());
}

FacetMargin facet_margin(const PointSet& ps) {
  if (ps.empty()) throw Error("empty point set");
  const std::vector<Point> basis = linear_span_basis(ps);
  const std::size_t k = basis.size();
  if (k == 0) return {1, Rational(4)};

  const std::size_t m = ps.size();
  std::optional<FacetMargin> best;
  std::vector<std::size_t> pick(k);
  for (std::size_t i = 0; i < k; ++i) pick[i] = i;
  std::vector<Rational> heights(m);
  while (k <= m) {
    // Normal n in the span orthogonal to q_i - q_0 for the picked points.
    std::vector<std::vector<Rational>> rows;
    for (std::size_t i = 1; i < k; ++i) {
      const Point diff = ps[pick[i]] - ps[pick[0]];
      std::vector<Rational> row(k);
      for (std::size_t j = 0; j < k; ++j) row[j] = dot(basis[j], diff);
      rows.push_back(std::move(row));
    }
    const auto kernel = null_space(std::move(rows), k);
    if (kernel.size() == 1) {
      Point normal(ps.dim());
      for (std::size_t j = 0; j < k; ++j) normal += kernel[0][j] * basis[j];
      for (std::size_t i = 0; i < m; ++i) heights[i] = dot(normal, ps[i]);
      const Rational& level = heights[pick[0]];
      const Rational norm2 = dot(normal, normal);
      for (int s : {1, -1}) {
        bool supporting = true;
        for (std::size_t i = 0; i < m && supporting; ++i)
          supporting = s > 0 ? heights[i] <= level : heights[i] >= level;
        if (!supporting) continue;
        FacetMargin candidate{s * sgn(level), level * level / norm2};
        if (!best || margin_less(candidate, *best)) best = candidate;
      }
    }
    // next combination
    std::size_t i = k;
    while (i > 0 && pick[i - 1] == m - k + i - 1) --i;
    if (i == 0) break;
    ++pick[i - 1];
    for (std::size_t j = i; j < k; ++j) pick[j] = pick[j - 1] + 1;
  }
  if (!best) throw Error("internal: no supporting facet found");
  return *best;
}

Inradius inradius(const PointSet& ps) {
  if (ps.empty()) throw Error("empty point set");
  if (!origin_in_relative_interior(ps).interior) throw Error("origin not in relative interior");
  const FacetMargin margin = facet_margin(ps);
  if (margin.sign <= 0) throw Error("internal: facet margin disagrees with relative-interior test");
  Inradius r;
  r.squared = margin.squared;
  r.value = std::sqrt(margin.squared.get_d());
  Rational root;
  if (exact_sqrt(margin.squared, root)) {
    r.exact = root;
    r.value = root.get_d();
  }
  return r;
}

bool conv_membership(const Point& x, const PointSet& ps) {
  if (ps.empty()) throw Error("empty point set");
  if (x.dim() != ps.dim()) throw Error("dimension mismatch: point has " + std::to_string(x.dim()) +
                                       " coordinates, set has " + std::to_string(ps.dim()));
  LinearProgram lp;
  for (std::size_t i = 0; i < ps.size(); ++i) lp.add_variable();
  for (std::size_t k = 0; k < x.dim(); ++k) {
    std::vector<Rational> row(ps.size());
    for (std::size_t i = 0; i < ps.size(); ++i) row[i] = ps[i][k];
    lp.add_constraint(std::move(row), Sense::Equal, x[k]);
  }
  lp.add_constraint(std::vector<Rational>(ps.size(), Rational(1)), Sense::Equal, 1);
  return solve_lp(lp).status == LPStatus::Optimal;
}

}  // namespace robustna
