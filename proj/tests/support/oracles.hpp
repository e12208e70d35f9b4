#pragma once

// Independent checks used to validate library results. Nothing here calls the
// LP solver.

#include "robustna/geometry.hpp"

#include <vector>

namespace testing_support {

using robustna::Point;
using robustna::PointSet;
using robustna::Rational;

inline Rational cross(const Point& a, const Point& b) { return a[0] * b[1] - a[1] * b[0]; }

/// Origin in the relative interior of Conv(ps) for d <= 2, by exhaustive
/// enumeration of supporting lines (d = 2) or extreme values (d = 1).
inline bool brute_force_interior(const PointSet& ps) {
  const std::size_t d = ps.dim();
  const std::size_t m = ps.size();
  bool all_zero = true;
  for (const auto& p : ps) all_zero = all_zero && p.is_zero();
  if (all_zero) return true;
  if (d == 1) {
    Rational lo = ps[0][0], hi = ps[0][0];
    for (const auto& p : ps) {
      lo = std::min(lo, p[0]);
      hi = std::max(hi, p[0]);
    }
    return sgn(lo) < 0 && sgn(hi) > 0;
  }
  // d == 2: affine dimension from the points themselves.
  std::size_t far = 0;
  for (std::size_t i = 1; i < m; ++i)
    if (!(ps[i] == ps[0])) far = i;
  if (far == 0) return false;  // single non-zero point
  const Point dir = ps[far] - ps[0];
  bool collinear = true;
  for (const auto& p : ps) collinear = collinear && sgn(cross(dir, p - ps[0])) == 0;
  if (collinear) {
    // Origin must lie on the line, strictly between the extreme points.
    if (sgn(cross(dir, Point(2) - ps[0])) != 0) return false;
    bool below = false, above = false;
    for (const auto& p : ps) {
      const Rational s = robustna::dot(dir, p);
      below = below || sgn(s) < 0;
      above = above || sgn(s) > 0;
    }
    return below && above;
  }
  // Full-dimensional: every supporting line must leave the origin strictly inside.
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = i + 1; j < m; ++j) {
      const Point e = ps[j] - ps[i];
      int side = 0;
      bool supporting = true;
      for (const auto& p : ps) {
        const int s = sgn(cross(e, p - ps[i]));
        if (s == 0) continue;
        if (side == 0) side = s;
        if (s != side) {
          supporting = false;
          break;
        }
      }
      if (!supporting || side == 0) continue;
      if (sgn(cross(e, Point(2) - ps[i])) != side) return false;
    }
  }
  return true;
}

/// Linear-span membership for d <= 3 via determinants of the spanning set.
inline bool in_span(const Point& h, const PointSet& ps) {
  PointSet extended = ps;
  const std::size_t before = robustna::linear_span_basis(ps).size();
  extended.insert(h);
  return robustna::linear_span_basis(extended).size() == before;
}

}  // namespace testing_support
