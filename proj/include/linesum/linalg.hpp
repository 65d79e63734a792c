#pragma once

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "linesum/ring.hpp"

namespace linesum {

// Dense matrix over a RingSpec.  Entries are stored as canonical ring
// representatives; all arithmetic is exact.
class ExactMatrix {
 public:
  ExactMatrix(std::size_t rows, std::size_t cols, RingSpec ring)
      : rows_(rows), cols_(cols), ring_(std::move(ring)), entries_(rows * cols, Rat(0)) {}

  static ExactMatrix identity(std::size_t n, const RingSpec& ring) {
    ExactMatrix m(n, n, ring);
    for (std::size_t i = 0; i < n; ++i) m.set(i, i, 1);
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  const RingSpec& ring() const { return ring_; }

  const Rat& operator()(std::size_t i, std::size_t j) const { return entries_[i * cols_ + j]; }

  void set(std::size_t i, std::size_t j, const Rat& v) { entries_[i * cols_ + j] = ring_.canonical(v); }

  ExactMatrix transposed() const {
    ExactMatrix t(cols_, rows_, ring_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) t.entries_[j * rows_ + i] = entries_[i * cols_ + j];
    return t;
  }

  // m * x
  std::vector<Rat> apply(const std::vector<Rat>& x) const {
    if (x.size() != cols_) throw ValidationError("matrix: vector length does not match column count");
    std::vector<Rat> y(rows_, Rat(0));
    for (std::size_t i = 0; i < rows_; ++i) {
      Rat acc(0);
      for (std::size_t j = 0; j < cols_; ++j) {
        const Rat& e = entries_[i * cols_ + j];
        if (e == 0) continue;
        acc = ring_.add(acc, ring_.mul(e, x[j]));
      }
      y[i] = acc;
    }
    return y;
  }

  // y^T * m
  std::vector<Rat> apply_left(const std::vector<Rat>& y) const {
    if (y.size() != rows_) throw ValidationError("matrix: vector length does not match row count");
    std::vector<Rat> x(cols_, Rat(0));
    for (std::size_t i = 0; i < rows_; ++i) {
      if (y[i] == 0) continue;
      for (std::size_t j = 0; j < cols_; ++j) {
        const Rat& e = entries_[i * cols_ + j];
        if (e == 0) continue;
        x[j] = ring_.add(x[j], ring_.mul(y[i], e));
      }
    }
    return x;
  }

  ExactMatrix multiplied(const ExactMatrix& o) const {
    if (cols_ != o.rows_ || ring_ != o.ring_) throw ValidationError("matrix: product shape/ring mismatch");
    ExactMatrix p(rows_, o.cols_, ring_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t k = 0; k < cols_; ++k) {
        const Rat& a = entries_[i * cols_ + k];
        if (a == 0) continue;
        for (std::size_t j = 0; j < o.cols_; ++j) {
          const Rat& b = o(k, j);
          if (b == 0) continue;
          p.entries_[i * o.cols_ + j] = ring_.add(p.entries_[i * o.cols_ + j], ring_.mul(a, b));
        }
      }
    return p;
  }

  bool operator==(const ExactMatrix& o) const {
    return rows_ == o.rows_ && cols_ == o.cols_ && ring_ == o.ring_ && entries_ == o.entries_;
  }

 private:
  std::size_t rows_, cols_;
  RingSpec ring_;
  std::vector<Rat> entries_;
};

// Reduced row echelon form of a field matrix with the row transform recorded:
// transform * m == rref, transform invertible.
struct Echelon {
  ExactMatrix rref;
  ExactMatrix transform;
  std::vector<std::size_t> pivot_cols;

  std::size_t rank() const { return pivot_cols.size(); }
};

// Gauss-Jordan elimination.  Pivot choice is the first nonzero entry in
// column order, so the result is deterministic.
inline Echelon reduced_row_echelon(const ExactMatrix& m) {
  const RingSpec& ring = m.ring();
  if (!ring.is_field()) throw ValidationError("echelon: coefficient ring must be a field");
  const std::size_t rows = m.rows(), cols = m.cols();
  ExactMatrix a = m;
  ExactMatrix e = ExactMatrix::identity(rows, ring);
  std::vector<std::size_t> pivots;

  auto scale_row = [&](ExactMatrix& t, std::size_t i, const Rat& c) {
    for (std::size_t j = 0; j < t.cols(); ++j)
      if (t(i, j) != 0) t.set(i, j, ring.mul(t(i, j), c));
  };
  auto axpy_row = [&](ExactMatrix& t, std::size_t dst, std::size_t src, const Rat& c) {
    for (std::size_t j = 0; j < t.cols(); ++j) {
      if (t(src, j) == 0) continue;
      t.set(dst, j, ring.add(t(dst, j), ring.mul(c, t(src, j))));
    }
  };
  auto swap_rows = [&](ExactMatrix& t, std::size_t i, std::size_t k) {
    for (std::size_t j = 0; j < t.cols(); ++j) {
      Rat tmp = t(i, j);
      t.set(i, j, t(k, j));
      t.set(k, j, tmp);
    }
  };

  std::size_t row = 0;
  for (std::size_t col = 0; col < cols && row < rows; ++col) {
    std::size_t sel = rows;
    for (std::size_t i = row; i < rows; ++i)
      if (a(i, col) != 0) {
        sel = i;
        break;
      }
    if (sel == rows) continue;
    if (sel != row) {
      swap_rows(a, sel, row);
      swap_rows(e, sel, row);
    }
    Rat invp = ring.inv(a(row, col));
    scale_row(a, row, invp);
    scale_row(e, row, invp);
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == row || a(i, col) == 0) continue;
      Rat c = ring.neg(a(i, col));
      axpy_row(a, i, row, c);
      axpy_row(e, i, row, c);
    }
    pivots.push_back(col);
    ++row;
  }
  return Echelon{std::move(a), std::move(e), std::move(pivots)};
}

inline std::size_t rank_of(const ExactMatrix& m) { return reduced_row_echelon(m).rank(); }

// Basis of {x : m x = 0}.  One vector per free column, that free coordinate
// set to 1, listed in increasing free-column order.
inline std::vector<std::vector<Rat>> right_nullspace(const ExactMatrix& m) {
  const RingSpec& ring = m.ring();
  if (!ring.is_field())
    throw ValidationError("nullspace: coefficient ring must be a field (use the Smith solver over Z)");
  Echelon e = reduced_row_echelon(m);
  const std::size_t cols = m.cols();
  std::vector<bool> is_pivot(cols, false);
  for (std::size_t c : e.pivot_cols) is_pivot[c] = true;
  std::vector<std::vector<Rat>> basis;
  for (std::size_t f = 0; f < cols; ++f) {
    if (is_pivot[f]) continue;
    std::vector<Rat> v(cols, Rat(0));
    v[f] = 1;
    for (std::size_t i = 0; i < e.pivot_cols.size(); ++i) v[e.pivot_cols[i]] = ring.neg(e.rref(i, f));
    basis.push_back(std::move(v));
  }
  return basis;
}

inline std::vector<std::vector<Rat>> left_nullspace(const ExactMatrix& m) {
  return right_nullspace(m.transposed());
}

// Rank of an integer matrix after reduction mod p.
inline std::size_t rank_mod_p(const ExactMatrix& m, const Int& p) {
  if (m.ring().kind() != RingKind::Integers)
    throw ValidationError("rank_mod_p: expected a matrix over Z");
  RingSpec fp = RingSpec::prime_field(p);
  ExactMatrix r(m.rows(), m.cols(), fp);
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) r.set(i, j, m(i, j));
  return rank_of(r);
}

// Prepared repeated solves of m x = rhs over a field.  The echelon transform
// is computed once; each solve costs one matrix-vector product.
class FieldSolver {
 public:
  explicit FieldSolver(const ExactMatrix& m)
      : ring_(m.ring()), rows_(m.rows()), cols_(m.cols()), e_(reduced_row_echelon(m)) {}

  std::size_t rank() const { return e_.rank(); }
  std::size_t nullity() const { return cols_ - e_.rank(); }
  const Echelon& echelon() const { return e_; }

  // Particular solution with all free coordinates set to 0; std::nullopt when
  // the system is inconsistent.
  std::optional<std::vector<Rat>> solve(const std::vector<Rat>& rhs) const {
    if (rhs.size() != rows_) throw ValidationError("solve: right-hand side has wrong length");
    std::vector<Rat> c = e_.transform.apply(rhs);
    for (std::size_t i = e_.rank(); i < rows_; ++i)
      if (c[i] != 0) return std::nullopt;
    std::vector<Rat> x(cols_, Rat(0));
    for (std::size_t i = 0; i < e_.pivot_cols.size(); ++i) x[e_.pivot_cols[i]] = c[i];
    return x;
  }

 private:
  RingSpec ring_;
  std::size_t rows_, cols_;
  Echelon e_;
};

// Smith normal form U m V = diag(d_1..d_r, 0..) with U, V unimodular and
// d_1 | d_2 | ... | d_r, all positive.
struct SmithNormalForm {
  std::vector<Int> invariant_factors;
  ExactMatrix left;    // U, rows x rows
  ExactMatrix right;   // V, cols x cols
};

inline SmithNormalForm smith_normal_form(const ExactMatrix& m) {
  if (m.ring().kind() != RingKind::Integers)
    throw ValidationError("smith_normal_form: expected a matrix over Z");
  const std::size_t rows = m.rows(), cols = m.cols();
  std::vector<Int> s(rows * cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) {
      Rat v = m(i, j);
      s[i * cols + j] = numerator(v);
    }
  std::vector<Int> u(rows * rows, Int(0)), v(cols * cols, Int(0));
  for (std::size_t i = 0; i < rows; ++i) u[i * rows + i] = 1;
  for (std::size_t j = 0; j < cols; ++j) v[j * cols + j] = 1;

  auto S = [&](std::size_t i, std::size_t j) -> Int& { return s[i * cols + j]; };

  auto swap_rows = [&](std::size_t a, std::size_t b) {
    if (a == b) return;
    for (std::size_t j = 0; j < cols; ++j) std::swap(S(a, j), S(b, j));
    for (std::size_t j = 0; j < rows; ++j) std::swap(u[a * rows + j], u[b * rows + j]);
  };
  auto swap_cols = [&](std::size_t a, std::size_t b) {
    if (a == b) return;
    for (std::size_t i = 0; i < rows; ++i) std::swap(S(i, a), S(i, b));
    for (std::size_t i = 0; i < cols; ++i) std::swap(v[i * cols + a], v[i * cols + b]);
  };
  // row[a] -= q * row[b]
  auto row_sub = [&](std::size_t a, std::size_t b, const Int& q) {
    if (q == 0) return;
    for (std::size_t j = 0; j < cols; ++j) S(a, j) -= q * S(b, j);
    for (std::size_t j = 0; j < rows; ++j) u[a * rows + j] -= q * u[b * rows + j];
  };
  // col[a] -= q * col[b]
  auto col_sub = [&](std::size_t a, std::size_t b, const Int& q) {
    if (q == 0) return;
    for (std::size_t i = 0; i < rows; ++i) S(i, a) -= q * S(i, b);
    for (std::size_t i = 0; i < cols; ++i) v[i * cols + a] -= q * v[i * cols + b];
  };
  auto negate_row = [&](std::size_t a) {
    for (std::size_t j = 0; j < cols; ++j) S(a, j) = -S(a, j);
    for (std::size_t j = 0; j < rows; ++j) u[a * rows + j] = -u[a * rows + j];
  };

  std::vector<Int> factors;
  std::size_t t = 0;
  const std::size_t bound = rows < cols ? rows : cols;
  while (t < bound) {
    // smallest |entry| in the trailing block, earliest position on ties
    std::size_t pi = rows, pj = cols;
    for (std::size_t i = t; i < rows; ++i)
      for (std::size_t j = t; j < cols; ++j) {
        if (S(i, j) == 0) continue;
        if (pi == rows || abs(S(i, j)) < abs(S(pi, pj))) {
          pi = i;
          pj = j;
        }
      }
    if (pi == rows) break;
    swap_rows(t, pi);
    swap_cols(t, pj);

    for (;;) {
      // clear column t, keeping the pivot as small as the remainders it meets
      bool clean = false;
      while (!clean) {
        clean = true;
        for (std::size_t i = t + 1; i < rows; ++i) {
          while (S(i, t) != 0) {
            Int q = round_div(S(i, t), S(t, t));
            row_sub(i, t, q);
            if (S(i, t) != 0) swap_rows(i, t);
          }
        }
        for (std::size_t j = t + 1; j < cols; ++j) {
          while (S(t, j) != 0) {
            Int q = round_div(S(t, j), S(t, t));
            col_sub(j, t, q);
            if (S(t, j) != 0) swap_cols(j, t);
          }
        }
        for (std::size_t i = t + 1; i < rows && clean; ++i)
          if (S(i, t) != 0) clean = false;
        for (std::size_t j = t + 1; j < cols && clean; ++j)
          if (S(t, j) != 0) clean = false;
      }
      // enforce divisibility of the trailing block by the pivot
      std::size_t bad = rows;
      for (std::size_t i = t + 1; i < rows && bad == rows; ++i)
        for (std::size_t j = t + 1; j < cols; ++j)
          if (S(i, j) % S(t, t) != 0) {
            bad = i;
            break;
          }
      if (bad == rows) break;
      row_sub(t, bad, Int(-1));  // row[t] += row[bad]
    }
    if (S(t, t) < 0) negate_row(t);
    factors.push_back(S(t, t));
    ++t;
  }

  RingSpec z = RingSpec::integers();
  ExactMatrix U(rows, rows, z), V(cols, cols, z);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < rows; ++j) U.set(i, j, Rat(u[i * rows + j]));
  for (std::size_t i = 0; i < cols; ++i)
    for (std::size_t j = 0; j < cols; ++j) V.set(i, j, Rat(v[i * cols + j]));
  return SmithNormalForm{std::move(factors), std::move(U), std::move(V)};
}

// Prepared integral solves of m x = rhs over Z via the Smith form: with
// U m V = D, x = V z where z_i = (U rhs)_i / d_i must divide exactly and the
// remaining coordinates of U rhs must vanish.  Free coordinates are set to 0.
class SmithSolver {
 public:
  explicit SmithSolver(const ExactMatrix& m)
      : rows_(m.rows()), cols_(m.cols()), snf_(smith_normal_form(m)) {}

  const SmithNormalForm& smith() const { return snf_; }
  std::size_t rank() const { return snf_.invariant_factors.size(); }

  std::optional<std::vector<Rat>> solve(const std::vector<Rat>& rhs) const {
    if (rhs.size() != rows_) throw ValidationError("solve: right-hand side has wrong length");
    for (const Rat& x : rhs)
      if (!is_integral(x)) throw ValidationError("solve: right-hand side must be integral over Z");
    std::vector<Rat> c = snf_.left.apply(rhs);
    const std::size_t r = snf_.invariant_factors.size();
    std::vector<Rat> z(cols_, Rat(0));
    for (std::size_t i = 0; i < rows_; ++i) {
      Rat ci = c[i];
      Int num = numerator(ci);
      if (i < r) {
        const Int& d = snf_.invariant_factors[i];
        if (num % d != 0) return std::nullopt;
        z[i] = Rat(num / d);
      } else if (num != 0) {
        return std::nullopt;
      }
    }
    return snf_.right.apply(z);
  }

 private:
  std::size_t rows_, cols_;
  SmithNormalForm snf_;
};

// One-shot exact solve.  Fields use echelon elimination; Z demands an
// integral solution and goes through the Smith form.
inline std::optional<std::vector<Rat>> solve_exact(const ExactMatrix& m, const std::vector<Rat>& rhs) {
  if (m.ring().is_field()) return FieldSolver(m).solve(rhs);
  return SmithSolver(m).solve(rhs);
}

}  // namespace linesum
