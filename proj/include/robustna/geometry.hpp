#pragma once

#include "robustna/rational.hpp"

#include <cstddef>
#include <initializer_list>
#include <optional>
#include <string>
#include <vector>

namespace robustna {

/// A vector of exact rationals in R^d (price levels or price increments).
class Point {
 public:
  Point() = default;
  explicit Point(std::size_t dim) : coords_(dim) {}
  explicit Point(std::vector<Rational> coords) : coords_(std::move(coords)) {}
  Point(std::initializer_list<Rational> coords) : coords_(coords) {}

  std::size_t dim() const { return coords_.size(); }
  const Rational& operator[](std::size_t i) const { return coords_[i]; }
  Rational& operator[](std::size_t i) { return coords_[i]; }
  const std::vector<Rational>& coords() const { return coords_; }
  auto begin() const { return coords_.begin(); }
  auto end() const { return coords_.end(); }

  bool is_zero() const;
  std::vector<double> to_doubles() const;

  Point& operator+=(const Point& other);
  Point& operator-=(const Point& other);
  Point& operator*=(const Rational& s);
  friend Point operator+(Point a, const Point& b) { return a += b; }
  friend Point operator-(Point a, const Point& b) { return a -= b; }
  friend Point operator*(const Rational& s, Point a) { return a *= s; }
  friend bool operator==(const Point& a, const Point& b) { return a.coords_ == b.coords_; }
  friend bool operator<(const Point& a, const Point& b) { return a.coords_ < b.coords_; }

 private:
  std::vector<Rational> coords_;
};

Rational dot(const Point& a, const Point& b);
std::string to_string(const Point& p);

/// Finite duplicate-free point collection; insertion order of first occurrences is kept.
class PointSet {
 public:
  PointSet() = default;
  explicit PointSet(std::vector<Point> points);

  /// Adds `p` unless an equal point is present; returns its position.
  std::size_t insert(const Point& p);

  std::size_t size() const { return points_.size(); }
  bool empty() const { return points_.empty(); }
  std::size_t dim() const { return points_.empty() ? 0 : points_.front().dim(); }
  const Point& operator[](std::size_t i) const { return points_[i]; }
  const std::vector<Point>& points() const { return points_; }
  auto begin() const { return points_.begin(); }
  auto end() const { return points_.end(); }
  bool contains(const Point& p) const;

  /// True when every point of this set is in `other`.
  bool subset_of(const PointSet& other) const;
  /// Set equality, ignoring order.
  bool same_points(const PointSet& other) const;

 private:
  std::vector<Point> points_;
};

PointSet scaled(const PointSet& ps, const Rational& factor);

struct AffineHull {
  Point base;
  std::vector<Point> basis;  ///< reduced row-echelon rows, linearly independent
  std::size_t dim = 0;
};

AffineHull affine_hull(const PointSet& ps);

/// Canonical (reduced row-echelon) basis of the linear span of the points.
std::vector<Point> linear_span_basis(const PointSet& ps);

/// Basis of {c : rows·c = 0}; rows all have length `columns`.
std::vector<std::vector<Rational>> null_space(std::vector<std::vector<Rational>> rows, std::size_t columns);

/// Certificate for the relative-interior test.
///
/// interior == true: `weights` are strictly positive, sum to 1, and
/// combine the points to the origin. Otherwise `direction` is a vector of the
/// span with direction·p >= 0 for all p and > 0 for at least one p.
struct InteriorCertificate {
  bool interior = false;
  std::vector<Rational> weights;
  Point direction;
};

InteriorCertificate origin_in_relative_interior(const PointSet& ps);

/// Largest radius of a ball around the origin, within the span, that stays
/// inside the convex hull. `squared` is exact; `exact` is set when the radius
/// itself is rational.
struct Inradius {
  Rational squared;
  double value = 0;
  std::optional<Rational> exact;
};

/// Requires the origin in the relative interior; {0} yields the value 2.
Inradius inradius(const PointSet& ps);

/// Signed distance from the origin to the nearest supporting facet hyperplane
/// of conv(ps) inside the span of ps: positive exactly when the origin lies in
/// the relative interior (then it equals the inradius), zero on the relative
/// boundary, negative otherwise. Computed by brute force over facet candidates.
struct FacetMargin {
  int sign = 0;
  Rational squared;  ///< square of the distance
  double value() const;
};

FacetMargin facet_margin(const PointSet& ps);

bool conv_membership(const Point& x, const PointSet& ps);

}  // namespace robustna
