#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "colline/error.hpp"
#include "colline/linalg.hpp"
#include "colline/scalar.hpp"
#include "colline/vector.hpp"

namespace colline {

/// The point set {t * direction + origin : t in Q}. Equality is extensional.
class Line {
 public:
  Line(Vector origin, Vector direction) : origin_(std::move(origin)), direction_(std::move(direction)) {
    require_same_dim(origin_, direction_);
    if (direction_.is_zero()) throw DegenerateError("line with zero direction");
  }

  /// Parses `line (o1, ..., on) dir (d1, ..., dn)`.
  static Line parse(std::string_view text) {
    auto dir = text.find("dir");
    auto kw = text.find("line");
    if (kw == std::string_view::npos || dir == std::string_view::npos || dir < kw) {
      throw Error("malformed line '" + std::string(text) + "'");
    }
    return Line(Vector::parse(text.substr(kw + 4, dir - kw - 4)), Vector::parse(text.substr(dir + 3)));
  }

  const Vector& origin() const { return origin_; }
  const Vector& direction() const { return direction_; }
  std::size_t dim() const { return origin_.dim(); }

  Vector at(const Scalar& t) const { return origin_ + t * direction_; }

  bool contains(const Vector& p) const {
    require_same_dim(p, origin_);
    return collinearity_scalar(p - origin_, direction_).has_value();
  }

  /// Parameter t with at(t) = p, if p is on the line.
  std::optional<Scalar> parameter_of(const Vector& p) const {
    require_same_dim(p, origin_);
    return collinearity_scalar(p - origin_, direction_);
  }

  std::string str() const { return "line " + origin_.str() + " dir " + direction_.str(); }

  friend bool operator==(const Line& a, const Line& b) {
    if (a.dim() != b.dim()) return false;
    return !linearly_independent(a.direction_, b.direction_) && a.contains(b.origin_);
  }

 private:
  Vector origin_;
  Vector direction_;
};

/// origin + Q dir1 + Q dir2 with dir1, dir2 independent.
class Plane {
 public:
  Plane(Vector origin, Vector dir1, Vector dir2)
      : origin_(std::move(origin)), dir1_(std::move(dir1)), dir2_(std::move(dir2)) {
    require_same_dim(origin_, dir1_);
    require_same_dim(origin_, dir2_);
    if (!linearly_independent(dir1_, dir2_)) throw DegenerateError("plane directions are dependent");
  }

  const Vector& origin() const { return origin_; }
  const Vector& dir1() const { return dir1_; }
  const Vector& dir2() const { return dir2_; }
  std::size_t dim() const { return origin_.dim(); }

  Vector at(const Scalar& s, const Scalar& t) const { return origin_ + s * dir1_ + t * dir2_; }

  bool contains(const Vector& p) const {
    require_same_dim(p, origin_);
    const Vector basis[] = {dir1_, dir2_};
    return in_span(basis, p - origin_);
  }

  bool contains(const Line& l) const {
    const Vector basis[] = {dir1_, dir2_};
    return contains(l.origin()) && in_span(basis, l.direction());
  }

  std::string str() const {
    return "plane " + origin_.str() + " dir " + dir1_.str() + " dir " + dir2_.str();
  }

  friend bool operator==(const Plane& a, const Plane& b) {
    return a.dim() == b.dim() && a.contains(b.origin_) && a.contains(b.origin_ + b.dir1_) &&
           a.contains(b.origin_ + b.dir2_);
  }

 private:
  Vector origin_;
  Vector dir1_;
  Vector dir2_;
};

/// A point c dividing a-b in ratio r : s, remembered with the ratio it came from.
struct RatioPoint {
  Scalar r;
  Scalar s;
  Vector point;
};

inline Line line_through(const Vector& a, const Vector& b) {
  require_same_dim(a, b);
  if (a == b) throw DegenerateError("line_through: points coincide at " + a.str());
  return Line(a, b - a);
}

/// c = (r / (r + s)) (b - a) + a.
inline Vector divides_in_ratio(const Vector& a, const Vector& b, const Scalar& r, const Scalar& s) {
  require_same_dim(a, b);
  Scalar total = r + s;
  if (total.is_zero()) throw DegenerateError("divides_in_ratio: r + s = 0");
  return (r / total) * (b - a) + a;
}

inline RatioPoint ratio_point(const Vector& a, const Vector& b, const Scalar& r, const Scalar& s) {
  return RatioPoint{r, s, divides_in_ratio(a, b, r, s)};
}

/// (t, 1 - t) with c = t (b - a) + a when c lies on the line through a and b.
inline std::optional<std::pair<Scalar, Scalar>> ratio_of(const Vector& a, const Vector& b, const Vector& c) {
  require_same_dim(a, b);
  require_same_dim(a, c);
  if (a == b) throw DegenerateError("ratio_of: a = b");
  auto t = collinearity_scalar(c - a, b - a);
  if (!t) return std::nullopt;
  return std::pair{*t, Scalar(1) - *t};
}

enum class Interval { closed, open };

/// Closed: t in [0, 1]; open: t in (0, 1). For a = b the closed interval is {a}, the open one empty.
inline bool in_interval(const Vector& a, const Vector& b, const Vector& c, Interval kind) {
  require_same_dim(a, b);
  require_same_dim(a, c);
  if (a == b) return kind == Interval::closed && c == a;
  auto ratio = ratio_of(a, b, c);
  if (!ratio) return false;
  const Scalar& t = ratio->first;
  if (kind == Interval::closed) return t >= Scalar(0) && t <= Scalar(1);
  return t > Scalar(0) && t < Scalar(1);
}

/// The unique common point of two lines, absent when they are parallel (equal or disjoint) or skew.
inline std::optional<Vector> intersection(const Line& l0, const Line& l1) {
  require_same_dim(l0.origin(), l1.origin());
  if (!linearly_independent(l0.direction(), l1.direction())) return std::nullopt;
  const Vector cols[] = {l0.direction(), -l1.direction()};
  auto x = solve_unique(cols, l1.origin() - l0.origin());
  if (!x) return std::nullopt;
  return l0.at((*x)[0]);
}

/// Parallel: equal, or coplanar and disjoint. Lines with dependent directions are always one of
/// the two (sharing a point means sharing all), and lines with independent directions are neither.
inline bool lines_parallel(const Line& l0, const Line& l1) {
  require_same_dim(l0.origin(), l1.origin());
  return !linearly_independent(l0.direction(), l1.direction());
}

inline Plane plane_through(const Vector& a, const Vector& b, const Vector& c) {
  require_same_dim(a, b);
  require_same_dim(a, c);
  const Vector pts[] = {a, b, c};
  if (affine_rank(pts) < 2) throw DegenerateError("plane_through: points are collinear");
  return Plane(a, b - a, c - a);
}

/// A line through a point meeting two other lines at two different points.
struct Crossing {
  Line line;
  Vector on_first;
  Vector on_second;
};

/// A line through p crossing l0 and l1 at two distinct points, where l0, l1 are distinct
/// intersecting lines and p lies in their plane. Absent when p is their intersection point.
///
/// Candidates through p are tried in a fixed order: origin(l0) + direction(l0), origin(l0),
/// then the same two points of l1, then further points of both lines.
inline std::optional<Crossing> crossing_line(const Vector& p, const Line& l0, const Line& l1) {
  require_same_dim(p, l0.origin());
  require_same_dim(p, l1.origin());
  auto meet = intersection(l0, l1);
  if (!meet) throw PreconditionError("crossing_line: lines must be distinct, non-parallel and coplanar");
  Plane plane(*meet, l0.direction(), l1.direction());
  if (!plane.contains(p)) throw PreconditionError("crossing_line: point " + p.str() + " is not in the plane of the lines");

  const std::vector<Vector> candidates = {
      l0.origin() + l0.direction(), l0.origin(), l1.origin() + l1.direction(), l1.origin(),
      l0.origin() - l0.direction(), l1.origin() - l1.direction(),
      l0.origin() + Scalar(2) * l0.direction(), l1.origin() + Scalar(2) * l1.direction(),
  };
  for (const auto& q : candidates) {
    if (q == p) continue;
    Line m = line_through(p, q);
    auto p0 = intersection(m, l0);
    auto p1 = intersection(m, l1);
    if (!p0 || !p1 || *p0 == *p1) continue;
    return Crossing{m, *p0, *p1};
  }
  return std::nullopt;
}

}  // namespace colline
