#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <utility>
#include <vector>

#include "linesum/laurent.hpp"
#include "linesum/linalg.hpp"

namespace linesum {

// A line in the plane: the dir-th direction and the value of the line index
// a*y - b*x shared by all points on the line.
struct LineId {
  std::size_t dir;
  Int index;

  friend bool operator==(const LineId& a, const LineId& b) { return a.dir == b.dir && a.index == b.index; }
  friend bool operator!=(const LineId& a, const LineId& b) { return !(a == b); }
  friend bool operator<(const LineId& a, const LineId& b) {
    if (a.dir != b.dir) return a.dir < b.dir;
    return a.index < b.index;
  }
};

// Index of the line through p with direction d = (a, b): a*y - b*x.  Constant
// exactly on {p + t d}, and consecutive parallel lines differ by 1 when d is
// primitive, hence the primitivity requirement.
inline Int line_index(const Point& p, const Direction& d) {
  if (!d.is_primitive()) throw ValidationError("line index: direction must be primitive");
  return d.a() * p.y - d.b() * p.x;
}

// Finitely supported function on the lattice with values in a ring; the
// object line sums are taken of.
class Table {
 public:
  explicit Table(RingSpec ring) : ring_(std::move(ring)) {}

  static Table from_laurent(const LaurentPoly2& f) {
    Table t(f.ring());
    t.values_ = f.terms();
    return t;
  }

  LaurentPoly2 to_laurent() const {
    LaurentPoly2 f(ring_);
    for (const auto& [p, v] : values_) f.add_term(p, v);
    return f;
  }

  const RingSpec& ring() const { return ring_; }
  const std::map<Point, Rat>& values() const { return values_; }
  bool is_zero() const { return values_.empty(); }

  Rat value(const Point& p) const {
    auto it = values_.find(p);
    return it == values_.end() ? Rat(0) : it->second;
  }

  void add(const Point& p, const Rat& v) {
    Rat c = ring_.canonical(v);
    auto it = values_.find(p);
    if (it == values_.end()) {
      if (c != 0) values_.emplace(p, c);
      return;
    }
    Rat s = ring_.add(it->second, c);
    if (s == 0)
      values_.erase(it);
    else
      it->second = s;
  }

  std::vector<Point> support() const {
    std::vector<Point> s;
    s.reserve(values_.size());
    for (const auto& [p, v] : values_) s.push_back(p);
    return s;
  }

  bool supported_on(const std::vector<Point>& sorted_pts) const {
    for (const auto& [p, v] : values_)
      if (!std::binary_search(sorted_pts.begin(), sorted_pts.end(), p)) return false;
    return true;
  }

  bool operator==(const Table& o) const { return ring_ == o.ring_ && values_ == o.values_; }
  bool operator!=(const Table& o) const { return !(*this == o); }

 private:
  RingSpec ring_;
  std::map<Point, Rat> values_;
};

// Finitely supported assignment of ring values to lines.
class LineSumVector {
 public:
  explicit LineSumVector(RingSpec ring) : ring_(std::move(ring)) {}

  const RingSpec& ring() const { return ring_; }
  const std::map<LineId, Rat>& entries() const { return entries_; }
  bool is_zero() const { return entries_.empty(); }

  Rat value(const LineId& l) const {
    auto it = entries_.find(l);
    return it == entries_.end() ? Rat(0) : it->second;
  }

  void add(const LineId& l, const Rat& v) {
    Rat c = ring_.canonical(v);
    auto it = entries_.find(l);
    if (it == entries_.end()) {
      if (c != 0) entries_.emplace(l, c);
      return;
    }
    Rat s = ring_.add(it->second, c);
    if (s == 0)
      entries_.erase(it);
    else
      it->second = s;
  }

  bool operator==(const LineSumVector& o) const { return ring_ == o.ring_ && entries_ == o.entries_; }
  bool operator!=(const LineSumVector& o) const { return !(*this == o); }

 private:
  RingSpec ring_;
  std::map<LineId, Rat> entries_;
};

// All lines meeting the point set, sorted by (direction, index).
inline std::vector<LineId> enumerate_lines(const std::vector<Point>& pts,
                                           const std::vector<Direction>& dirs) {
  std::set<LineId> lines;
  for (std::size_t d = 0; d < dirs.size(); ++d)
    for (const Point& p : pts) lines.insert(LineId{d, line_index(p, dirs[d])});
  return std::vector<LineId>(lines.begin(), lines.end());
}

// Line sums of f along every direction.
inline LineSumVector project(const Table& f, const std::vector<Direction>& dirs) {
  LineSumVector p(f.ring());
  for (std::size_t d = 0; d < dirs.size(); ++d)
    for (const auto& [pt, v] : f.values()) p.add(LineId{d, line_index(pt, dirs[d])}, v);
  return p;
}

// Matrix of the line-sum map on the given point set: rows are
// enumerate_lines(pts, dirs) in order, columns the points in sorted order,
// entry 1 exactly when the point lies on the line.
inline ExactMatrix linesum_matrix(const std::vector<Point>& pts, const std::vector<Direction>& dirs,
                                  const RingSpec& ring) {
  std::vector<Point> cols = pts;
  std::sort(cols.begin(), cols.end());
  cols.erase(std::unique(cols.begin(), cols.end()), cols.end());
  std::vector<LineId> lines = enumerate_lines(cols, dirs);
  std::map<LineId, std::size_t> row_of;
  for (std::size_t i = 0; i < lines.size(); ++i) row_of.emplace(lines[i], i);
  ExactMatrix m(lines.size(), cols.size(), ring);
  for (std::size_t j = 0; j < cols.size(); ++j)
    for (std::size_t d = 0; d < dirs.size(); ++d)
      m.set(row_of.at(LineId{d, line_index(cols[j], dirs[d])}), j, Rat(1));
  return m;
}

// Values of f in the given point order (such as the matrix column order).
inline std::vector<Rat> coefficient_vector(const Table& f, const std::vector<Point>& order) {
  std::vector<Rat> v;
  v.reserve(order.size());
  for (const Point& p : order) v.push_back(f.value(p));
  return v;
}

inline std::vector<Rat> linesum_rhs(const LineSumVector& p, const std::vector<LineId>& order) {
  std::vector<Rat> v;
  v.reserve(order.size());
  for (const LineId& l : order) v.push_back(p.value(l));
  return v;
}

inline Table table_from_vector(const std::vector<Rat>& v, const std::vector<Point>& order,
                               const RingSpec& ring) {
  Table t(ring);
  for (std::size_t i = 0; i < order.size(); ++i) t.add(order[i], v[i]);
  return t;
}

// Block decomposition of the line-sum matrix of B relative to a subset A:
//
//   sigma_B  =  [ sigma_a   delta_rel ]        rows: lines meeting A
//               [   0       sigma_rel ]        rows: lines missing A
//
// columns split into points of A and points of B \ A.  delta_rel records how
// the extra points interfere with the lines of A.
struct RelativeSplit {
  ExactMatrix sigma_a, sigma_rel, delta_rel;
  std::vector<LineId> lines_a, lines_rel;
  std::vector<Point> points_a, points_rel;

  ExactMatrix reassembled() const {
    const RingSpec& ring = sigma_a.ring();
    std::vector<LineId> all_lines = lines_a;
    all_lines.insert(all_lines.end(), lines_rel.begin(), lines_rel.end());
    std::sort(all_lines.begin(), all_lines.end());
    std::vector<Point> all_pts = points_a;
    all_pts.insert(all_pts.end(), points_rel.begin(), points_rel.end());
    std::sort(all_pts.begin(), all_pts.end());
    std::map<LineId, std::size_t> row_of;
    for (std::size_t i = 0; i < all_lines.size(); ++i) row_of.emplace(all_lines[i], i);
    std::map<Point, std::size_t> col_of;
    for (std::size_t j = 0; j < all_pts.size(); ++j) col_of.emplace(all_pts[j], j);
    ExactMatrix m(all_lines.size(), all_pts.size(), ring);
    auto blit = [&](const ExactMatrix& block, const std::vector<LineId>& rs, const std::vector<Point>& cs) {
      for (std::size_t i = 0; i < rs.size(); ++i)
        for (std::size_t j = 0; j < cs.size(); ++j)
          if (block(i, j) != 0) m.set(row_of.at(rs[i]), col_of.at(cs[j]), block(i, j));
    };
    blit(sigma_a, lines_a, points_a);
    blit(sigma_rel, lines_rel, points_rel);
    blit(delta_rel, lines_a, points_rel);
    return m;
  }
};

inline RelativeSplit relative_split(const std::vector<Point>& b_pts, const std::vector<Point>& a_pts,
                                    const std::vector<Direction>& dirs, const RingSpec& ring) {
  std::vector<Point> b = b_pts, a = a_pts;
  std::sort(b.begin(), b.end());
  b.erase(std::unique(b.begin(), b.end()), b.end());
  std::sort(a.begin(), a.end());
  a.erase(std::unique(a.begin(), a.end()), a.end());
  if (a.empty()) throw ValidationError("relative split: A must be non-empty");
  if (!std::includes(b.begin(), b.end(), a.begin(), a.end()))
    throw ValidationError("relative split: A must be a subset of B");
  std::vector<Point> rel;
  std::set_difference(b.begin(), b.end(), a.begin(), a.end(), std::back_inserter(rel));

  std::vector<LineId> lines_a = enumerate_lines(a, dirs);
  std::vector<LineId> lines_b = enumerate_lines(b, dirs);
  std::vector<LineId> lines_rel;
  std::set_difference(lines_b.begin(), lines_b.end(), lines_a.begin(), lines_a.end(),
                      std::back_inserter(lines_rel));

  std::map<LineId, std::size_t> row_a, row_rel;
  for (std::size_t i = 0; i < lines_a.size(); ++i) row_a.emplace(lines_a[i], i);
  for (std::size_t i = 0; i < lines_rel.size(); ++i) row_rel.emplace(lines_rel[i], i);

  ExactMatrix sigma_a(lines_a.size(), a.size(), ring);
  for (std::size_t j = 0; j < a.size(); ++j)
    for (std::size_t d = 0; d < dirs.size(); ++d)
      sigma_a.set(row_a.at(LineId{d, line_index(a[j], dirs[d])}), j, Rat(1));

  ExactMatrix sigma_rel(lines_rel.size(), rel.size(), ring);
  ExactMatrix delta_rel(lines_a.size(), rel.size(), ring);
  for (std::size_t j = 0; j < rel.size(); ++j)
    for (std::size_t d = 0; d < dirs.size(); ++d) {
      LineId l{d, line_index(rel[j], dirs[d])};
      auto it = row_a.find(l);
      if (it != row_a.end())
        delta_rel.set(it->second, j, Rat(1));
      else
        sigma_rel.set(row_rel.at(l), j, Rat(1));
    }

  return RelativeSplit{std::move(sigma_a), std::move(sigma_rel), std::move(delta_rel),
                       std::move(lines_a), std::move(lines_rel), std::move(a), std::move(rel)};
}

enum class InterferenceMethod { KernelLifting, RankCounting };

// Non-interference of B over A: whether the extra points leave the dependency
// theory of A intact.  KernelLifting checks that delta_rel maps ker(sigma_rel)
// into im(sigma_a); RankCounting checks nullity(sigma_B) =
// nullity(sigma_A) + nullity(sigma_rel).  The two agree.
inline bool interference_test(const std::vector<Point>& b_pts, const std::vector<Point>& a_pts,
                              const std::vector<Direction>& dirs, const RingSpec& ring,
                              InterferenceMethod method = InterferenceMethod::KernelLifting) {
  if (!ring.is_field()) throw ValidationError("interference test: coefficient ring must be a field");
  RelativeSplit rs = relative_split(b_pts, a_pts, dirs, ring);
  if (method == InterferenceMethod::RankCounting) {
    std::vector<Point> b = rs.points_a;
    b.insert(b.end(), rs.points_rel.begin(), rs.points_rel.end());
    ExactMatrix sigma_b = linesum_matrix(b, dirs, ring);
    std::size_t null_b = sigma_b.cols() - rank_of(sigma_b);
    std::size_t null_a = rs.sigma_a.cols() - rank_of(rs.sigma_a);
    std::size_t null_rel = rs.sigma_rel.cols() - rank_of(rs.sigma_rel);
    return null_b == null_a + null_rel;
  }
  std::vector<std::vector<Rat>> kern = right_nullspace(rs.sigma_rel);
  if (kern.empty()) return true;
  FieldSolver solver(rs.sigma_a);
  for (const auto& v : kern) {
    std::vector<Rat> w = rs.delta_rel.apply(v);
    if (!solver.solve(w)) return false;
  }
  return true;
}

}  // namespace linesum
