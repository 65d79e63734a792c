#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "linesum/prng.hpp"
#include "linesum/tomography.hpp"

namespace linesum {

// A linear functional on line sums that vanishes on every consistent
// line-sum vector of its region: a row vector w with w * sigma == 0.
class Dependency {
 public:
  Dependency(std::map<LineId, Rat> weights, std::vector<Point> region, RingSpec ring)
      : weights_(std::move(weights)), region_(std::move(region)), ring_(std::move(ring)) {}

  const std::map<LineId, Rat>& weights() const { return weights_; }
  const std::vector<Point>& region() const { return region_; }
  const RingSpec& ring() const { return ring_; }

  Rat weight(const LineId& l) const {
    auto it = weights_.find(l);
    return it == weights_.end() ? Rat(0) : it->second;
  }

  Rat evaluate(const LineSumVector& p) const {
    Rat acc(0);
    for (const auto& [l, w] : weights_) acc = ring_.add(acc, ring_.mul(w, p.value(l)));
    return acc;
  }

  // Exact check that the functional kills the line sums of every table on
  // the region: for each point, the weights of its lines sum to zero.
  bool annihilates_region(const std::vector<Direction>& dirs) const {
    for (const Point& p : region_) {
      Rat acc(0);
      for (std::size_t d = 0; d < dirs.size(); ++d)
        acc = ring_.add(acc, weight(LineId{d, line_index(p, dirs[d])}));
      if (acc != 0) return false;
    }
    return true;
  }

 private:
  std::map<LineId, Rat> weights_;
  std::vector<Point> region_;
  RingSpec ring_;
};

// Number of dependencies an unbounded region admits: sum of |det(d_i, d_j)|
// over direction pairs i < j.
inline Int global_dependency_count(const std::vector<Direction>& dirs) {
  require_pairwise_independent(dirs);
  Int total = 0;
  for (std::size_t i = 0; i < dirs.size(); ++i)
    for (std::size_t j = i + 1; j < dirs.size(); ++j) total += abs(det(dirs[i], dirs[j]));
  return total;
}

// Basis of the switching module of a convex region: one table per lattice
// translate of the kernel polynomial whose Newton polygon fits inside the
// region's hull, in lexicographic translate order.
inline std::vector<Table> kernel_basis(const ConvexLatticeSet& a, const std::vector<Direction>& dirs,
                                       const RingSpec& ring) {
  LaurentPoly2 d = kernel_polynomial(dirs, ring);
  Polygon delta = polygon_of(d);
  std::vector<Table> basis;
  for (const Point& t : fitting_translates(a.hull(), delta)) {
    LaurentPoly2 shifted = LaurentPoly2::monomial(ring, t) * d;
    basis.push_back(Table::from_laurent(shifted));
  }
  return basis;
}

namespace detail {

// Over Q, rescale an echelonized weight vector to a primitive integer vector
// (positive leading entry); fields with no integer structure are left as is.
inline void normalize_weight_vector(std::vector<Rat>& w, const RingSpec& ring) {
  if (ring.kind() != RingKind::Rationals) return;
  Int l = 1;
  for (const Rat& x : w) {
    if (x == 0) continue;
    Rat v = x;
    l = lcm(l, denominator(v));
  }
  Int g = 0;
  for (Rat& x : w) {
    if (x == 0) continue;
    x = x * Rat(l);
    Rat v = x;
    g = gcd(g, numerator(v));
  }
  if (g > 1)
    for (Rat& x : w) x = x / Rat(g);
}

}  // namespace detail

// Basis of the left nullspace of the region's line-sum matrix, echelonized
// over the sorted line order; over Q each vector is scaled to primitive
// integer weights.
inline std::vector<Dependency> dependency_basis(const std::vector<Point>& pts,
                                                const std::vector<Direction>& dirs,
                                                const RingSpec& ring) {
  if (!ring.is_field())
    throw ValidationError("dependency basis: coefficient ring must be a field");
  std::vector<Point> region = pts;
  std::sort(region.begin(), region.end());
  region.erase(std::unique(region.begin(), region.end()), region.end());
  if (region.empty()) throw ValidationError("dependency basis: empty region");
  std::vector<LineId> lines = enumerate_lines(region, dirs);
  ExactMatrix sigma = linesum_matrix(region, dirs, ring);
  std::vector<Dependency> out;
  for (std::vector<Rat>& w : left_nullspace(sigma)) {
    detail::normalize_weight_vector(w, ring);
    std::map<LineId, Rat> weights;
    for (std::size_t i = 0; i < lines.size(); ++i)
      if (w[i] != 0) weights.emplace(lines[i], w[i]);
    out.emplace_back(std::move(weights), region, ring);
  }
  return out;
}

// Decomposition of the dependency space of a convex region into the part
// visible on the rounded subset (inherited from the unbounded theory) and
// the boundary part.
struct DependencyDecomposition {
  std::size_t total_dim = 0;
  std::optional<std::size_t> global_dim;
  std::optional<std::size_t> local_dim;
  std::optional<ConvexLatticeSet> rounded;

  bool available() const { return rounded.has_value(); }
};

inline DependencyDecomposition split_dependencies(const ConvexLatticeSet& a,
                                                  const std::vector<Direction>& dirs,
                                                  const RingSpec& ring) {
  if (!ring.is_field())
    throw ValidationError("dependency split: coefficient ring must be a field");
  DependencyDecomposition out;
  ExactMatrix sigma = linesum_matrix(a.points(), dirs, ring);
  out.total_dim = sigma.rows() - rank_of(sigma);
  std::optional<ConvexLatticeSet> rounded = rounded_part(a, dirs);
  if (!rounded) return out;
  RelativeSplit rs = relative_split(a.points(), rounded->points(), dirs, ring);
  std::size_t local = rs.sigma_rel.rows() - rank_of(rs.sigma_rel);
  std::size_t global = global_dependency_count(dirs).convert_to<std::size_t>();
  if (out.total_dim != global + local)
    throw std::logic_error("dependency split: counts do not add up on a convex region");
  out.global_dim = global;
  out.local_dim = local;
  out.rounded = std::move(rounded);
  return out;
}

// Raised when a region is too thin for the recurrence to probe even one
// full window in the requested direction.
class RecurrenceInconclusive : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A dependency inherited from the unbounded theory has direction-i weights
// annihilated by the reduced annihilator of direction i: on every full
// window of consecutive line indices, the annihilator's coefficients give a
// linear recurrence the weights must satisfy.
inline bool recurrence_check(const Dependency& dep, const std::vector<Direction>& dirs, std::size_t i) {
  if (i >= dirs.size()) throw ValidationError("recurrence: direction index out of range");
  LaurentPoly1 ann = reduced_annihilator(dirs, i, dep.ring());
  std::set<Int> present;
  for (const Point& p : dep.region()) present.insert(line_index(p, dirs[i]));
  if (present.empty()) throw ValidationError("recurrence: empty region");
  const Int lo = *present.begin();
  const Int hi = *present.rbegin();
  const Int base = ann.min_exponent();
  const Int span = ann.max_exponent() - base;
  bool window_seen = false;
  bool ok = true;
  const RingSpec& ring = dep.ring();
  for (Int n = lo; n + span <= hi; ++n) {
    bool full = true;
    for (const auto& [e, c] : ann.terms())
      if (!present.count(n + (e - base))) {
        full = false;
        break;
      }
    if (!full) continue;
    window_seen = true;
    Rat acc(0);
    for (const auto& [e, c] : ann.terms())
      acc = ring.add(acc, ring.mul(c, dep.weight(LineId{i, n + (e - base)})));
    if (acc != 0) ok = false;
  }
  if (!window_seen)
    throw RecurrenceInconclusive("recurrence: no full window of direction-" + std::to_string(i) +
                                 " lines inside the region");
  return ok;
}

// Dimension data for one grid in the classical four-direction example.
struct HajduFamilyResult {
  std::string name;
  std::size_t relation_count = 0;
  bool annihilates_matrix = false;   // exact: weights * sigma == 0
  bool annihilates_samples = false;  // seeded random tables all killed
};

struct HajduExampleReport {
  std::size_t m = 0, n = 0, trials = 0;
  std::uint64_t seed = 0;
  std::vector<HajduFamilyResult> families;
  std::size_t relation_count = 0;
  std::size_t span_dim = 0;
  std::size_t dependency_dim = 0;
  bool relations_hold = false;
  bool independent = false;
  bool spans_dependency_space = false;
  // smallest grid (ordered by m+n, then m) whose seven relations are
  // already independent, within the sweep bounded by (m, n)
  std::optional<std::pair<std::size_t, std::size_t>> smallest_independent_grid;
};

namespace detail {

inline std::vector<Direction> hajdu_directions() {
  return {Direction(1, 0), Direction(0, 1), Direction(1, 1), Direction(1, -1)};
}

// The seven classical relations among row, column, diagonal and antidiagonal
// sums of an m x n grid, grouped in five families.  Line indices: row j has
// index j, column i has index -i, the diagonal through (i, j) has index
// j - i, the antidiagonal index i + j.
inline std::vector<std::pair<std::string, Dependency>> hajdu_relations(std::size_t m, std::size_t n) {
  RingSpec q = RingSpec::rationals();
  std::vector<Point> region;
  for (Int x = 0; x < Int(m); ++x)
    for (Int y = 0; y < Int(n); ++y) region.push_back(Point{x, y});
  std::sort(region.begin(), region.end());

  const Int mm(m), nn(n);
  std::vector<std::pair<std::string, Dependency>> out;
  auto add = [&](const std::string& name, std::map<LineId, Rat> w) {
    out.emplace_back(name, Dependency(std::move(w), region, q));
  };

  std::map<LineId, Rat> w;
  // totals: rows against columns, diagonals, antidiagonals
  for (Int j = 0; j < nn; ++j) w[LineId{0, j}] = 1;
  for (Int i = 0; i < mm; ++i) w[LineId{1, -i}] = -1;
  add("totals", std::move(w));

  w.clear();
  for (Int j = 0; j < nn; ++j) w[LineId{0, j}] = 1;
  for (Int h = -(mm - 1); h <= nn - 1; ++h) w[LineId{2, h}] = -1;
  add("totals", std::move(w));

  w.clear();
  for (Int j = 0; j < nn; ++j) w[LineId{0, j}] = 1;
  for (Int h = 0; h <= mm + nn - 2; ++h) w[LineId{3, h}] = -1;
  add("totals", std::move(w));

  // parity: odd diagonals against odd antidiagonals
  w.clear();
  for (Int h = -(mm - 1); h <= nn - 1; ++h)
    if ((h % 2 + 2) % 2 == 1) w[LineId{2, h}] = 1;
  for (Int h = 0; h <= mm + nn - 2; ++h)
    if (h % 2 == 1) w[LineId{3, h}] = -1;
  add("parity", std::move(w));

  // first moment against diagonals: sum j*r_j - sum i*c_i - sum h*t_h = 0
  w.clear();
  for (Int j = 1; j < nn; ++j) w[LineId{0, j}] = Rat(j);
  for (Int i = 1; i < mm; ++i) w[LineId{1, -i}] = Rat(-i);
  for (Int h = -(mm - 1); h <= nn - 1; ++h)
    if (h != 0) w[LineId{2, h}] = Rat(-h);
  add("moment_diagonals", std::move(w));

  // first moment against antidiagonals: sum j*r_j + sum i*c_i - sum h*u_h = 0
  w.clear();
  for (Int j = 1; j < nn; ++j) w[LineId{0, j}] = Rat(j);
  for (Int i = 1; i < mm; ++i) w[LineId{1, -i}] = Rat(i);
  for (Int h = 1; h <= mm + nn - 2; ++h) w[LineId{3, h}] = Rat(-h);
  add("moment_antidiagonals", std::move(w));

  // second moment: 2j^2, 2i^2 against h^2 on both diagonal families
  w.clear();
  for (Int j = 1; j < nn; ++j) w[LineId{0, j}] = Rat(2 * j * j);
  for (Int i = 1; i < mm; ++i) w[LineId{1, -i}] = Rat(2 * i * i);
  for (Int h = -(mm - 1); h <= nn - 1; ++h)
    if (h != 0) w[LineId{2, h}] = Rat(-h * h);
  for (Int h = 1; h <= mm + nn - 2; ++h) w[LineId{3, h}] = Rat(-h * h);
  add("second_moment", std::move(w));

  return out;
}

inline std::size_t hajdu_span_dim(std::size_t m, std::size_t n) {
  RingSpec q = RingSpec::rationals();
  auto rel = hajdu_relations(m, n);
  std::vector<LineId> lines = enumerate_lines(rel.front().second.region(), hajdu_directions());
  ExactMatrix stack(rel.size(), lines.size(), q);
  for (std::size_t r = 0; r < rel.size(); ++r)
    for (std::size_t c = 0; c < lines.size(); ++c) stack.set(r, c, rel[r].second.weight(lines[c]));
  return rank_of(stack);
}

}  // namespace detail

// Checks the classical seven relations on the m x n grid with directions
// (1,0), (0,1), (1,1), (1,-1): they annihilate line sums (exactly, and on
// seeded random tables), and for large enough grids they are independent
// and span the whole dependency space.
inline HajduExampleReport verify_hajdu_example(std::size_t m, std::size_t n, std::size_t trials,
                                               std::uint64_t seed) {
  if (m < 2 || n < 2) throw ValidationError("verify example: grid must be at least 2 x 2");
  HajduExampleReport rep;
  rep.m = m;
  rep.n = n;
  rep.trials = trials;
  rep.seed = seed;

  RingSpec q = RingSpec::rationals();
  std::vector<Direction> dirs = detail::hajdu_directions();
  auto relations = detail::hajdu_relations(m, n);
  rep.relation_count = relations.size();
  const std::vector<Point>& region = relations.front().second.region();

  // seeded sample projections, shared by all families
  SplitMix64 rng(seed);
  std::vector<LineSumVector> samples;
  for (std::size_t t = 0; t < trials; ++t) {
    Table f(q);
    for (const Point& p : region) f.add(p, Rat(rng.range(-9, 9)));
    samples.push_back(project(f, dirs));
  }

  std::map<std::string, HajduFamilyResult> families;
  for (const auto& [name, dep] : relations) {
    auto [it, fresh] = families.try_emplace(name);
    HajduFamilyResult& fam = it->second;
    if (fresh) {
      fam.name = name;
      fam.annihilates_matrix = true;
      fam.annihilates_samples = true;
    }
    fam.relation_count += 1;
    if (!dep.annihilates_region(dirs)) fam.annihilates_matrix = false;
    for (const LineSumVector& s : samples)
      if (dep.evaluate(s) != 0) {
        fam.annihilates_samples = false;
        break;
      }
  }
  rep.relations_hold = true;
  for (const auto& [name, fam] : families) {
    rep.families.push_back(fam);
    if (!fam.annihilates_matrix || !fam.annihilates_samples) rep.relations_hold = false;
  }

  rep.span_dim = detail::hajdu_span_dim(m, n);
  rep.independent = rep.span_dim == rep.relation_count;

  ExactMatrix sigma = linesum_matrix(region, dirs, q);
  rep.dependency_dim = sigma.rows() - rank_of(sigma);
  rep.spans_dependency_space = rep.relations_hold && rep.span_dim == rep.dependency_dim;

  std::vector<std::pair<std::size_t, std::size_t>> sweep;
  for (std::size_t mm = 2; mm <= m; ++mm)
    for (std::size_t nn = 2; nn <= n; ++nn) sweep.emplace_back(mm, nn);
  std::sort(sweep.begin(), sweep.end(), [](const auto& a, const auto& b) {
    if (a.first + a.second != b.first + b.second) return a.first + a.second < b.first + b.second;
    return a.first < b.first;
  });
  for (const auto& [mm, nn] : sweep)
    if (detail::hajdu_span_dim(mm, nn) == 7) {
      rep.smallest_independent_grid = {mm, nn};
      break;
    }
  return rep;
}

// Rank data of one region over Q and a list of primes, plus the integer
// structure of the line-sum matrix.
struct RankInvarianceReport {
  std::size_t rank_q = 0;
  std::size_t nullity_q = 0;
  std::size_t left_nullity_q = 0;
  struct PrimeRanks {
    Int p;
    std::size_t rank = 0;
    std::size_t nullity = 0;
    std::size_t left_nullity = 0;
  };
  std::vector<PrimeRanks> primes;
  std::vector<Int> invariant_factors;
  bool ranks_agree = false;
  bool torsion_free = false;  // all invariant factors are 1

  bool ok() const { return ranks_agree && torsion_free; }
};

inline RankInvarianceReport rank_invariance_report(const ConvexLatticeSet& a,
                                                   const std::vector<Direction>& dirs,
                                                   const std::vector<Int>& primes) {
  RankInvarianceReport rep;
  ExactMatrix sigma_z = linesum_matrix(a.points(), dirs, RingSpec::integers());
  ExactMatrix sigma_q = linesum_matrix(a.points(), dirs, RingSpec::rationals());
  rep.rank_q = rank_of(sigma_q);
  rep.nullity_q = sigma_q.cols() - rep.rank_q;
  rep.left_nullity_q = sigma_q.rows() - rep.rank_q;
  rep.ranks_agree = true;
  for (const Int& p : primes) {
    RankInvarianceReport::PrimeRanks pr;
    pr.p = p;
    pr.rank = rank_mod_p(sigma_z, p);
    pr.nullity = sigma_z.cols() - pr.rank;
    pr.left_nullity = sigma_z.rows() - pr.rank;
    if (pr.rank != rep.rank_q) rep.ranks_agree = false;
    rep.primes.push_back(std::move(pr));
  }
  SmithNormalForm snf = smith_normal_form(sigma_z);
  rep.invariant_factors = snf.invariant_factors;
  rep.torsion_free = rep.invariant_factors.size() == rep.rank_q;
  for (const Int& d : rep.invariant_factors)
    if (d != 1) rep.torsion_free = false;
  return rep;
}

}  // namespace linesum
