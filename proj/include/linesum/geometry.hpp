#pragma once

#include <algorithm>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "linesum/numeric.hpp"

namespace linesum {

struct Point {
  Int x, y;

  friend bool operator==(const Point& a, const Point& b) { return a.x == b.x && a.y == b.y; }
  friend bool operator!=(const Point& a, const Point& b) { return !(a == b); }
  friend bool operator<(const Point& a, const Point& b) {
    if (a.x != b.x) return a.x < b.x;
    return a.y < b.y;
  }
  friend Point operator+(const Point& a, const Point& b) { return {a.x + b.x, a.y + b.y}; }
  friend Point operator-(const Point& a, const Point& b) { return {a.x - b.x, a.y - b.y}; }
};

struct RPoint {
  Rat x, y;

  friend bool operator==(const RPoint& a, const RPoint& b) { return a.x == b.x && a.y == b.y; }
  friend bool operator!=(const RPoint& a, const RPoint& b) { return !(a == b); }
  friend bool operator<(const RPoint& a, const RPoint& b) {
    if (a.x != b.x) return a.x < b.x;
    return a.y < b.y;
  }
  friend RPoint operator+(const RPoint& a, const RPoint& b) {
    Rat x = a.x + b.x, y = a.y + b.y;
    return {x, y};
  }
  friend RPoint operator-(const RPoint& a, const RPoint& b) {
    Rat x = a.x - b.x, y = a.y - b.y;
    return {x, y};
  }
};

inline RPoint to_rational(const Point& p) { return {Rat(p.x), Rat(p.y)}; }

inline std::optional<Point> to_lattice(const RPoint& p) {
  if (!is_integral(p.x) || !is_integral(p.y)) return std::nullopt;
  Rat x = p.x, y = p.y;
  return Point{numerator(x), numerator(y)};
}

// Cross product of (a-o) and (b-o): positive when o->a->b turns left.
inline Rat cross(const RPoint& o, const RPoint& a, const RPoint& b) {
  Rat r = (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
  return r;
}

// A lattice direction, normalized so a > 0, or a == 0 and b > 0.
class Direction {
 public:
  Direction(Int a, Int b) {
    if (a == 0 && b == 0) throw ValidationError("direction: (0,0) is not a direction");
    if (a < 0 || (a == 0 && b < 0)) {
      a = -a;
      b = -b;
    }
    a_ = std::move(a);
    b_ = std::move(b);
    Int g = gcd(a_, b_);
    primitive_ = (g == 1);
  }

  const Int& a() const { return a_; }
  const Int& b() const { return b_; }
  bool is_primitive() const { return primitive_; }
  Point step() const { return {a_, b_}; }

  friend bool operator==(const Direction& u, const Direction& w) { return u.a_ == w.a_ && u.b_ == w.b_; }
  friend bool operator<(const Direction& u, const Direction& w) {
    if (u.a_ != w.a_) return u.a_ < w.a_;
    return u.b_ < w.b_;
  }

 private:
  Int a_, b_;
  bool primitive_;
};

inline Int det(const Direction& u, const Direction& w) { return u.a() * w.b() - u.b() * w.a(); }

inline void require_pairwise_independent(const std::vector<Direction>& dirs) {
  for (std::size_t i = 0; i < dirs.size(); ++i)
    for (std::size_t j = i + 1; j < dirs.size(); ++j)
      if (det(dirs[i], dirs[j]) == 0)
        throw ValidationError("directions: entries " + std::to_string(i) + " and " + std::to_string(j) +
                              " are linearly dependent");
}

inline void require_primitive(const std::vector<Direction>& dirs) {
  for (std::size_t i = 0; i < dirs.size(); ++i)
    if (!dirs[i].is_primitive())
      throw ValidationError("directions: entry " + std::to_string(i) + " is not primitive");
}

// Convex polygon with rational corners, stored counterclockwise starting at
// the lexicographically smallest corner, no three consecutive corners
// collinear.  A single point and a segment are allowed as degenerate cases.
class Polygon {
 public:
  static Polygon hull_of(std::vector<RPoint> pts) {
    if (pts.empty()) throw ValidationError("polygon: hull of an empty point set");
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    if (pts.size() == 1) return Polygon(std::move(pts));
    std::vector<RPoint> h;
    // lower hull, then upper hull; strict turns only
    for (const RPoint& p : pts) {
      while (h.size() >= 2 && cross(h[h.size() - 2], h[h.size() - 1], p) <= 0) h.pop_back();
      h.push_back(p);
    }
    std::size_t lower = h.size() + 1;
    for (auto it = pts.rbegin() + 1; it != pts.rend(); ++it) {
      while (h.size() >= lower && cross(h[h.size() - 2], h[h.size() - 1], *it) <= 0) h.pop_back();
      h.push_back(*it);
    }
    h.pop_back();
    return Polygon(std::move(h));
  }

  static Polygon hull_of_lattice(const std::vector<Point>& pts) {
    std::vector<RPoint> r;
    r.reserve(pts.size());
    for (const Point& p : pts) r.push_back(to_rational(p));
    return hull_of(std::move(r));
  }

  const std::vector<RPoint>& corners() const { return corners_; }
  bool is_point() const { return corners_.size() == 1; }
  bool is_segment() const { return corners_.size() == 2; }

  bool contains(const RPoint& p) const {
    if (corners_.size() == 1) return corners_[0] == p;
    if (corners_.size() == 2) {
      const RPoint& a = corners_[0];
      const RPoint& b = corners_[1];
      Rat c = cross(a, b, p);
      if (c != 0) return false;
      return !(p < a) && !(b < p);  // a <= p <= b in lex order works on a line sorted lex
    }
    for (std::size_t i = 0; i < corners_.size(); ++i) {
      const RPoint& a = corners_[i];
      const RPoint& b = corners_[(i + 1) % corners_.size()];
      Rat c = cross(a, b, p);
      if (c < 0) return false;
    }
    return true;
  }

  bool contains(const Polygon& q) const {
    for (const RPoint& c : q.corners_)
      if (!contains(c)) return false;
    return true;
  }

  Polygon translated(const RPoint& t) const {
    std::vector<RPoint> c = corners_;
    for (RPoint& p : c) p = p + t;
    return Polygon(std::move(c));
  }

  struct BBox {
    Rat min_x, max_x, min_y, max_y;
  };

  BBox bbox() const {
    BBox b{corners_[0].x, corners_[0].x, corners_[0].y, corners_[0].y};
    for (const RPoint& p : corners_) {
      if (p.x < b.min_x) b.min_x = p.x;
      if (p.x > b.max_x) b.max_x = p.x;
      if (p.y < b.min_y) b.min_y = p.y;
      if (p.y > b.max_y) b.max_y = p.y;
    }
    return b;
  }

  // All lattice points inside or on the boundary, sorted lexicographically.
  std::vector<Point> lattice_points() const {
    BBox b = bbox();
    std::vector<Point> out;
    for (Int x = rat_ceil(b.min_x); x <= rat_floor(b.max_x); ++x)
      for (Int y = rat_ceil(b.min_y); y <= rat_floor(b.max_y); ++y)
        if (contains(RPoint{Rat(x), Rat(y)})) out.push_back(Point{x, y});
    return out;
  }

  friend bool operator==(const Polygon& a, const Polygon& b) { return a.corners_ == b.corners_; }
  friend bool operator!=(const Polygon& a, const Polygon& b) { return !(a == b); }

 private:
  explicit Polygon(std::vector<RPoint> corners) : corners_(std::move(corners)) {}

  std::vector<RPoint> corners_;
};

inline Polygon convex_hull(const std::vector<RPoint>& pts) { return Polygon::hull_of(pts); }

inline std::vector<Point> lattice_points_in(const Polygon& p) { return p.lattice_points(); }

inline bool contains(const Polygon& p, const Polygon& q) { return p.contains(q); }

// Minkowski sum; every corner of the sum is a sum of corners of the parts.
inline Polygon minkowski_sum(const Polygon& p, const Polygon& q) {
  std::vector<RPoint> sums;
  sums.reserve(p.corners().size() * q.corners().size());
  for (const RPoint& a : p.corners())
    for (const RPoint& b : q.corners()) sums.push_back(a + b);
  return Polygon::hull_of(std::move(sums));
}

// Finite set A of lattice points that is exactly H(A) cap Z^2 for its own
// convex hull; the invariant is validated on construction.
class ConvexLatticeSet {
 public:
  // A := H(pts) cap Z^2
  static ConvexLatticeSet from_lattice_hull(const std::vector<Point>& pts) {
    if (pts.empty()) throw ValidationError("region: empty point set");
    Polygon h = Polygon::hull_of_lattice(pts);
    std::vector<Point> closed = h.lattice_points();
    return ConvexLatticeSet(std::move(closed), std::move(h));
  }

  // Validates that pts is already hull-closed.
  static ConvexLatticeSet from_exact_points(std::vector<Point> pts) {
    if (pts.empty()) throw ValidationError("region: empty point set");
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    Polygon h = Polygon::hull_of_lattice(pts);
    std::vector<Point> closed = h.lattice_points();
    if (closed != pts)
      throw ValidationError("region: point set is not convex (misses lattice points of its hull)");
    return ConvexLatticeSet(std::move(pts), std::move(h));
  }

  const std::vector<Point>& points() const { return points_; }
  const Polygon& hull() const { return hull_; }
  std::size_t size() const { return points_.size(); }

  friend bool operator==(const ConvexLatticeSet& a, const ConvexLatticeSet& b) {
    return a.points_ == b.points_;
  }

 private:
  ConvexLatticeSet(std::vector<Point> pts, Polygon hull) : points_(std::move(pts)), hull_(std::move(hull)) {}

  std::vector<Point> points_;  // sorted
  Polygon hull_;
};

// Whether a sorted-unique lattice point set is hull-closed.
inline bool is_convex_point_set(const std::vector<Point>& sorted_pts) {
  if (sorted_pts.empty()) return false;
  Polygon h = Polygon::hull_of_lattice(sorted_pts);
  return h.lattice_points() == sorted_pts;
}

// Minkowski sum of the segments from the origin to each direction step.
// Requires pairwise independent directions; non-primitive steps only when
// explicitly allowed.
inline Polygon delta_polygon(const std::vector<Direction>& dirs, bool allow_non_primitive = false) {
  if (dirs.empty()) throw ValidationError("delta: at least one direction is required");
  require_pairwise_independent(dirs);
  if (!allow_non_primitive) require_primitive(dirs);
  Polygon d = Polygon::hull_of({RPoint{Rat(0), Rat(0)}});
  for (const Direction& dir : dirs) {
    Polygon seg = Polygon::hull_of({RPoint{Rat(0), Rat(0)}, to_rational(dir.step())});
    d = minkowski_sum(d, seg);
  }
  return d;
}

// Lattice translates t with t + delta inside hull, sorted lexicographically.
inline std::vector<Point> fitting_translates(const Polygon& hull, const Polygon& delta) {
  Polygon::BBox hb = hull.bbox();
  Polygon::BBox db = delta.bbox();
  std::vector<Point> out;
  Int x_lo = rat_ceil(hb.min_x - db.min_x);
  Rat xhi = hb.max_x - db.max_x;
  Rat yhi = hb.max_y - db.max_y;
  Int x_hi = rat_floor(xhi);
  Int y_lo = rat_ceil(hb.min_y - db.min_y);
  Int y_hi = rat_floor(yhi);
  for (Int x = x_lo; x <= x_hi; ++x)
    for (Int y = y_lo; y <= y_hi; ++y) {
      RPoint t{Rat(x), Rat(y)};
      if (hull.contains(delta.translated(t))) out.push_back(Point{x, y});
    }
  return out;
}

// Largest "rounded" subset of A: the lattice points of the union of all
// translates of delta that fit inside H(A).  Empty union gives nullopt.
inline std::optional<ConvexLatticeSet> rounded_part(const ConvexLatticeSet& a,
                                                    const std::vector<Direction>& dirs,
                                                    bool allow_non_primitive = false) {
  Polygon delta = delta_polygon(dirs, allow_non_primitive);
  std::vector<Point> translates = fitting_translates(a.hull(), delta);
  if (translates.empty()) return std::nullopt;
  std::vector<Point> delta_pts = delta.lattice_points();
  std::set<Point> uni;
  for (const Point& t : translates)
    for (const Point& d : delta_pts) uni.insert(t + d);
  std::vector<Point> pts(uni.begin(), uni.end());
  if (!is_convex_point_set(pts))
    throw std::logic_error("rounded_part: union of fitted translates is not hull-closed");
  return ConvexLatticeSet::from_exact_points(std::move(pts));
}

// Description of a region as given in instance files.
struct RegionSpec {
  enum class Kind { Rect, HullOf, Explicit };

  Kind kind = Kind::Rect;
  Int width = 0, height = 0;     // Rect: [0,w) x [0,h)
  std::vector<Point> pts;        // HullOf / Explicit

  // The region's point set, sorted.  Explicit sets may be non-convex.
  std::vector<Point> realize() const {
    switch (kind) {
      case Kind::Rect: {
        if (width <= 0 || height <= 0) throw ValidationError("region: rectangle sides must be positive");
        std::vector<Point> out;
        for (Int x = 0; x < width; ++x)
          for (Int y = 0; y < height; ++y) out.push_back(Point{x, y});
        std::sort(out.begin(), out.end());
        return out;
      }
      case Kind::HullOf:
        return ConvexLatticeSet::from_lattice_hull(pts).points();
      case Kind::Explicit: {
        std::vector<Point> out = pts;
        if (out.empty()) throw ValidationError("region: empty point set");
        std::sort(out.begin(), out.end());
        out.erase(std::unique(out.begin(), out.end()), out.end());
        return out;
      }
    }
    throw ValidationError("region: unknown kind");
  }
};

}  // namespace linesum
