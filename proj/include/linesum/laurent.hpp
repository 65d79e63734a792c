#pragma once

#include <map>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "linesum/geometry.hpp"
#include "linesum/ring.hpp"

namespace linesum {

namespace detail {

// c^e for an Int exponent; negative exponents require c to be a unit.
inline Rat coeff_power(const RingSpec& ring, const Rat& c, const Int& e) {
  Rat base = c;
  Int n = e;
  if (n < 0) {
    base = ring.inv(base);
    n = -n;
  }
  Rat acc(1);
  while (n > 0) {
    if ((n & 1) != 0) acc = ring.mul(acc, base);
    base = ring.mul(base, base);
    n >>= 1;
  }
  return ring.canonical(acc);
}

}  // namespace detail

// Laurent polynomial in x, y: a finite map from integer exponent pairs to
// nonzero ring elements.
class LaurentPoly2 {
 public:
  explicit LaurentPoly2(RingSpec ring) : ring_(std::move(ring)) {}

  static LaurentPoly2 constant(const RingSpec& ring, const Rat& c) {
    LaurentPoly2 f(ring);
    f.add_term(Point{0, 0}, c);
    return f;
  }

  static LaurentPoly2 monomial(const RingSpec& ring, const Point& e, const Rat& c = Rat(1)) {
    LaurentPoly2 f(ring);
    f.add_term(e, c);
    return f;
  }

  const RingSpec& ring() const { return ring_; }
  const std::map<Point, Rat>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  Rat coeff(const Point& e) const {
    auto it = terms_.find(e);
    return it == terms_.end() ? Rat(0) : it->second;
  }

  void add_term(const Point& e, const Rat& c) {
    Rat v = ring_.canonical(c);
    auto it = terms_.find(e);
    if (it == terms_.end()) {
      if (v != 0) terms_.emplace(e, v);
      return;
    }
    Rat s = ring_.add(it->second, v);
    if (s == 0)
      terms_.erase(it);
    else
      it->second = s;
  }

  std::vector<Point> support() const {
    std::vector<Point> s;
    s.reserve(terms_.size());
    for (const auto& [e, c] : terms_) s.push_back(e);
    return s;
  }

  LaurentPoly2 operator+(const LaurentPoly2& o) const {
    check_ring(o);
    LaurentPoly2 r = *this;
    for (const auto& [e, c] : o.terms_) r.add_term(e, c);
    return r;
  }

  LaurentPoly2 operator-(const LaurentPoly2& o) const {
    check_ring(o);
    LaurentPoly2 r = *this;
    for (const auto& [e, c] : o.terms_) r.add_term(e, ring_.neg(c));
    return r;
  }

  LaurentPoly2 operator*(const LaurentPoly2& o) const {
    check_ring(o);
    LaurentPoly2 r(ring_);
    for (const auto& [e1, c1] : terms_)
      for (const auto& [e2, c2] : o.terms_) r.add_term(e1 + e2, ring_.mul(c1, c2));
    return r;
  }

  LaurentPoly2 negated() const {
    LaurentPoly2 r(ring_);
    for (const auto& [e, c] : terms_) r.add_term(e, ring_.neg(c));
    return r;
  }

  LaurentPoly2 scaled(const Rat& c) const {
    LaurentPoly2 r(ring_);
    for (const auto& [e, v] : terms_) r.add_term(e, ring_.mul(v, c));
    return r;
  }

  bool operator==(const LaurentPoly2& o) const { return ring_ == o.ring_ && terms_ == o.terms_; }
  bool operator!=(const LaurentPoly2& o) const { return !(*this == o); }

  std::string to_string() const {
    if (terms_.empty()) return "0";
    std::ostringstream out;
    bool first = true;
    for (const auto& [e, c] : terms_) {
      Rat a = c;
      bool neg = a < 0;
      if (neg) a = -a;
      if (first) {
        if (neg) out << "-";
        first = false;
      } else {
        out << (neg ? " - " : " + ");
      }
      std::string mono;
      if (e.x != 0) mono += "x" + (e.x == 1 ? "" : "^" + e.x.str());
      if (e.y != 0) mono += std::string(mono.empty() ? "" : "*") + "y" + (e.y == 1 ? "" : "^" + e.y.str());
      if (mono.empty())
        out << rat_to_string(a);
      else if (a == 1)
        out << mono;
      else
        out << rat_to_string(a) << "*" << mono;
    }
    return out.str();
  }

 private:
  void check_ring(const LaurentPoly2& o) const {
    if (ring_ != o.ring_) throw ValidationError("laurent: mixed coefficient rings");
  }

  RingSpec ring_;
  std::map<Point, Rat> terms_;
};

// Laurent polynomial in one variable z.
class LaurentPoly1 {
 public:
  explicit LaurentPoly1(RingSpec ring) : ring_(std::move(ring)) {}

  static LaurentPoly1 constant(const RingSpec& ring, const Rat& c) {
    LaurentPoly1 f(ring);
    f.add_term(0, c);
    return f;
  }

  static LaurentPoly1 monomial(const RingSpec& ring, const Int& e, const Rat& c = Rat(1)) {
    LaurentPoly1 f(ring);
    f.add_term(e, c);
    return f;
  }

  const RingSpec& ring() const { return ring_; }
  const std::map<Int, Rat>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  Rat coeff(const Int& e) const {
    auto it = terms_.find(e);
    return it == terms_.end() ? Rat(0) : it->second;
  }

  void add_term(const Int& e, const Rat& c) {
    Rat v = ring_.canonical(c);
    auto it = terms_.find(e);
    if (it == terms_.end()) {
      if (v != 0) terms_.emplace(e, v);
      return;
    }
    Rat s = ring_.add(it->second, v);
    if (s == 0)
      terms_.erase(it);
    else
      it->second = s;
  }

  const Int& min_exponent() const {
    if (terms_.empty()) throw ValidationError("laurent: exponent range of the zero polynomial");
    return terms_.begin()->first;
  }
  const Int& max_exponent() const {
    if (terms_.empty()) throw ValidationError("laurent: exponent range of the zero polynomial");
    return terms_.rbegin()->first;
  }

  LaurentPoly1 operator+(const LaurentPoly1& o) const {
    check_ring(o);
    LaurentPoly1 r = *this;
    for (const auto& [e, c] : o.terms_) r.add_term(e, c);
    return r;
  }

  LaurentPoly1 operator-(const LaurentPoly1& o) const {
    check_ring(o);
    LaurentPoly1 r = *this;
    for (const auto& [e, c] : o.terms_) r.add_term(e, ring_.neg(c));
    return r;
  }

  LaurentPoly1 operator*(const LaurentPoly1& o) const {
    check_ring(o);
    LaurentPoly1 r(ring_);
    for (const auto& [e1, c1] : terms_)
      for (const auto& [e2, c2] : o.terms_) r.add_term(e1 + e2, ring_.mul(c1, c2));
    return r;
  }

  LaurentPoly1 negated() const {
    LaurentPoly1 r(ring_);
    for (const auto& [e, c] : terms_) r.add_term(e, ring_.neg(c));
    return r;
  }

  // z^n * f
  LaurentPoly1 shifted(const Int& n) const {
    LaurentPoly1 r(ring_);
    for (const auto& [e, c] : terms_) r.add_term(e + n, c);
    return r;
  }

  bool operator==(const LaurentPoly1& o) const { return ring_ == o.ring_ && terms_ == o.terms_; }
  bool operator!=(const LaurentPoly1& o) const { return !(*this == o); }

  std::string to_string() const {
    if (terms_.empty()) return "0";
    std::ostringstream out;
    bool first = true;
    for (const auto& [e, c] : terms_) {
      Rat a = c;
      bool neg = a < 0;
      if (neg) a = -a;
      if (first) {
        if (neg) out << "-";
        first = false;
      } else {
        out << (neg ? " - " : " + ");
      }
      std::string mono;
      if (e != 0) mono = "z" + (e == 1 ? std::string() : "^" + e.str());
      if (mono.empty())
        out << rat_to_string(a);
      else if (a == 1)
        out << mono;
      else
        out << rat_to_string(a) << "*" << mono;
    }
    return out.str();
  }

 private:
  void check_ring(const LaurentPoly1& o) const {
    if (ring_ != o.ring_) throw ValidationError("laurent: mixed coefficient rings");
  }

  RingSpec ring_;
  std::map<Int, Rat> terms_;
};

// Newton polygon: convex hull of the support.
inline Polygon polygon_of(const LaurentPoly2& f) {
  if (f.is_zero()) throw ValidationError("laurent: polygon of the zero polynomial");
  return Polygon::hull_of_lattice(f.support());
}

// Every corner of the Newton polygon must carry a non-zerodivisor
// coefficient; over Z, Q and F_p that is every nonzero coefficient, and
// corners of the support hull are support points, so this holds whenever f
// is nonzero.  Kept as an explicit check so the multiplicativity of Newton
// polygons is guarded where it is relied upon.
inline bool has_strong_corners(const LaurentPoly2& f) {
  if (f.is_zero()) throw ValidationError("laurent: corners of the zero polynomial");
  Polygon p = polygon_of(f);
  for (const RPoint& c : p.corners()) {
    auto e = to_lattice(c);
    if (!e) return false;
    if (f.ring().is_zero(f.coeff(*e))) return false;
  }
  return true;
}

// Monoid map sending x and y to single-term units of a one-variable Laurent
// ring; applying it to a polynomial is a ring homomorphism.
class RingMap {
 public:
  RingMap(LaurentPoly1 x_image, LaurentPoly1 y_image)
      : x_(std::move(x_image)), y_(std::move(y_image)) {
    validate(x_, "x");
    validate(y_, "y");
    if (x_.ring() != y_.ring()) throw ValidationError("ring map: images live in different rings");
  }

  const LaurentPoly1& x_image() const { return x_; }
  const LaurentPoly1& y_image() const { return y_; }
  const RingSpec& ring() const { return x_.ring(); }

  LaurentPoly1 apply(const LaurentPoly2& f) const {
    if (f.ring() != ring()) throw ValidationError("ring map: polynomial ring mismatch");
    const RingSpec& r = ring();
    const auto& [xe, xc] = *x_.terms().begin();
    const auto& [ye, yc] = *y_.terms().begin();
    LaurentPoly1 out(r);
    for (const auto& [e, c] : f.terms()) {
      Int expo = xe * e.x + ye * e.y;
      Rat coef = r.mul(c, r.mul(detail::coeff_power(r, xc, e.x), detail::coeff_power(r, yc, e.y)));
      out.add_term(expo, coef);
    }
    return out;
  }

 private:
  static void validate(const LaurentPoly1& img, const char* var) {
    if (img.terms().size() != 1)
      throw ValidationError(std::string("ring map: image of ") + var + " must be a single term");
    if (!img.ring().is_unit(img.terms().begin()->second))
      throw ValidationError(std::string("ring map: image of ") + var + " must have a unit coefficient");
  }

  LaurentPoly1 x_, y_;
};

// x^a y^b - 1 for the direction (a, b).
inline LaurentPoly2 direction_binomial(const Direction& d, const RingSpec& ring) {
  LaurentPoly2 f = LaurentPoly2::monomial(ring, d.step());
  f.add_term(Point{0, 0}, Rat(-1));
  return f;
}

// Product of the direction binomials: the generator of the switching module.
inline LaurentPoly2 kernel_polynomial(const std::vector<Direction>& dirs, const RingSpec& ring) {
  if (dirs.empty()) throw ValidationError("kernel polynomial: at least one direction is required");
  require_pairwise_independent(dirs);
  require_primitive(dirs);
  LaurentPoly2 f = LaurentPoly2::constant(ring, Rat(1));
  for (const Direction& d : dirs) f = f * direction_binomial(d, ring);
  return f;
}

// Product of all direction binomials except the i-th.
inline LaurentPoly2 partial_product(const std::vector<Direction>& dirs, std::size_t i, const RingSpec& ring) {
  if (i >= dirs.size()) throw ValidationError("partial product: direction index out of range");
  require_pairwise_independent(dirs);
  require_primitive(dirs);
  LaurentPoly2 f = LaurentPoly2::constant(ring, Rat(1));
  for (std::size_t j = 0; j < dirs.size(); ++j)
    if (j != i) f = f * direction_binomial(dirs[j], ring);
  return f;
}

// The collapse along d = (a, b): x -> z^{-b}, y -> z^{a}.  A monomial x^i y^j
// lands on z^{line index of (i, j) along d}, so this realizes the line-sum
// grading for direction d.
inline RingMap line_collapse_map(const Direction& d, const RingSpec& ring) {
  if (!d.is_primitive()) throw ValidationError("collapse map: direction must be primitive");
  return RingMap(LaurentPoly1::monomial(ring, -d.b()), LaurentPoly1::monomial(ring, d.a()));
}

// Image of the i-th partial product under the i-th collapse map; equals
// the product over j != i of (z^{det(d_i, d_j)} - 1).  Its weights give the
// linear recurrence satisfied by direction-i coefficients of any dependency
// coming from the ambient theory.
inline LaurentPoly1 reduced_annihilator(const std::vector<Direction>& dirs, std::size_t i,
                                        const RingSpec& ring) {
  if (i >= dirs.size()) throw ValidationError("reduced annihilator: direction index out of range");
  require_primitive(dirs);
  return line_collapse_map(dirs[i], ring).apply(partial_product(dirs, i, ring));
}

// f == s * z^n * g for some integer n and s in {+1, -1}.
inline bool unit_equal(const LaurentPoly1& f, const LaurentPoly1& g) {
  if (f.ring() != g.ring()) throw ValidationError("laurent: mixed coefficient rings");
  if (f.is_zero() || g.is_zero()) return f.is_zero() && g.is_zero();
  Int n = f.min_exponent() - g.min_exponent();
  LaurentPoly1 shifted = g.shifted(n);
  return f == shifted || f == shifted.negated();
}

}  // namespace linesum
