#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "linesum/dependency.hpp"

namespace linesum {

enum class VerdictStatus { Consistent, Inconsistent };
enum class VerdictMode { DependencyBacked, SolveBased };

struct ViolatedDependency {
  Dependency dep;
  Rat value;  // the nonzero evaluation
};

struct ConsistencyVerdict {
  VerdictStatus status = VerdictStatus::Consistent;
  VerdictMode mode = VerdictMode::DependencyBacked;
  std::optional<Table> witness;               // present iff consistent
  std::optional<ViolatedDependency> violated; // present iff inconsistent in dependency mode
  std::optional<std::string> warning;
};

// Everything needed to answer repeated queries on one (region, directions,
// ring) triple: the line-sum matrix, a prepared solver, and the dependency
// basis used for fast rejection and violation reporting.
struct PreparedSystem {
  std::vector<Point> points;      // sorted
  std::vector<Direction> dirs;
  RingSpec ring;
  std::vector<LineId> lines;
  ExactMatrix sigma;
  bool convex;
  // exactly one of the two solvers is prepared, by ring kind
  std::optional<FieldSolver> field_solver;
  std::optional<SmithSolver> smith_solver;
  // over a field: basis in that field; over Z: basis over Q (a violated
  // rational dependency already rules out integral solutions)
  std::vector<Dependency> deps;

  PreparedSystem(std::vector<Point> pts, std::vector<Direction> ds, RingSpec r)
      : points(std::move(pts)),
        dirs(std::move(ds)),
        ring(std::move(r)),
        lines(enumerate_lines(points, dirs)),
        sigma(linesum_matrix(points, dirs, ring)),
        convex(is_convex_point_set(points)) {
    if (ring.is_field()) {
      field_solver.emplace(sigma);
      deps = dependency_basis(points, dirs, ring);
    } else {
      smith_solver.emplace(sigma);
      deps = dependency_basis(points, dirs, RingSpec::rationals());
    }
  }
};

// Process-wide store of prepared systems, keyed by the exact content of
// (points, directions, ring).
class SystemCache {
 public:
  static SystemCache& global() {
    static SystemCache cache;
    return cache;
  }

  std::shared_ptr<const PreparedSystem> get(const std::vector<Point>& pts,
                                            const std::vector<Direction>& dirs, const RingSpec& ring) {
    std::vector<Point> sorted = pts;
    std::sort(sorted.begin(), sorted.end());
    sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
    std::string key = make_key(sorted, dirs, ring);
    std::lock_guard<std::mutex> lock(mu_);
    auto it = entries_.find(key);
    if (it != entries_.end()) return it->second;
    auto sys = std::make_shared<const PreparedSystem>(std::move(sorted), dirs, ring);
    entries_.emplace(std::move(key), sys);
    return sys;
  }

  std::size_t size() const {
    std::lock_guard<std::mutex> lock(mu_);
    return entries_.size();
  }

 private:
  static std::string make_key(const std::vector<Point>& pts, const std::vector<Direction>& dirs,
                              const RingSpec& ring) {
    std::ostringstream key;
    key << ring.token() << "|d";
    for (const Direction& d : dirs) key << d.a() << "," << d.b() << ";";
    key << "|p";
    for (const Point& p : pts) key << p.x << "," << p.y << ";";
    return key.str();
  }

  mutable std::mutex mu_;
  std::map<std::string, std::shared_ptr<const PreparedSystem>> entries_;
};

// Decides whether p is the line-sum vector of some table on the region.
//
// Convex regions get the dependency-backed route: evaluate the cached
// dependency basis (over Z: the rational basis), reject on the first
// violation, otherwise solve for a witness: over fields by the echelon
// transform, over Z integrally via the Smith form.  Non-convex regions fall
// back to a direct solve and say so in the verdict.
inline ConsistencyVerdict check_consistency(const std::vector<Point>& a,
                                            const std::vector<Direction>& dirs, const LineSumVector& p,
                                            const RingSpec& ring) {
  if (p.ring() != ring) throw ValidationError("consistency: line sums carry a different ring");
  require_pairwise_independent(dirs);
  require_primitive(dirs);
  auto sys = SystemCache::global().get(a, dirs, ring);
  for (const auto& [l, v] : p.entries()) {
    if (!std::binary_search(sys->lines.begin(), sys->lines.end(), l))
      throw ValidationError("consistency: line sums mention a line that misses the region (direction " +
                            std::to_string(l.dir) + ", index " + l.index.str() + ")");
    if (!ring.contains(v))
      throw ValidationError("consistency: value " + rat_to_string(v) + " is not in " + ring.name());
  }

  ConsistencyVerdict verdict;
  std::vector<Rat> rhs = linesum_rhs(p, sys->lines);

  if (sys->convex) {
    verdict.mode = VerdictMode::DependencyBacked;
    for (const Dependency& dep : sys->deps) {
      Rat v = dep.evaluate(p);
      if (v != 0) {
        verdict.status = VerdictStatus::Inconsistent;
        verdict.violated = ViolatedDependency{dep, v};
        return verdict;
      }
    }
    std::optional<std::vector<Rat>> x =
        sys->field_solver ? sys->field_solver->solve(rhs) : sys->smith_solver->solve(rhs);
    if (!x)
      throw std::logic_error(
          "consistency: all dependencies vanish on a convex region but no witness exists");
    verdict.status = VerdictStatus::Consistent;
    verdict.witness = table_from_vector(*x, sys->points, ring);
    return verdict;
  }

  verdict.mode = VerdictMode::SolveBased;
  verdict.warning =
      "region is not convex: the dependency criterion is not guaranteed, verdict from a direct solve";
  std::optional<std::vector<Rat>> x =
      sys->field_solver ? sys->field_solver->solve(rhs) : sys->smith_solver->solve(rhs);
  if (x) {
    verdict.status = VerdictStatus::Consistent;
    verdict.witness = table_from_vector(*x, sys->points, ring);
  } else {
    verdict.status = VerdictStatus::Inconsistent;
  }
  return verdict;
}

inline std::optional<Table> reconstruct(const std::vector<Point>& a, const std::vector<Direction>& dirs,
                                        const LineSumVector& p, const RingSpec& ring) {
  return check_consistency(a, dirs, p, ring).witness;
}

enum class InstanceMode { Image, Perturbed, Uniform };

struct RandomInstance {
  std::vector<Point> region;
  std::vector<Direction> dirs;
  RingSpec ring;
  LineSumVector line_sums;
  std::optional<Table> table;  // the source table for Image and Perturbed

  RandomInstance(RingSpec r) : ring(std::move(r)), line_sums(ring) {}
};

// Seeded instance generator.  Image: line sums of a random table.  Perturbed:
// the same plus 1 on one random line.  Uniform: independent random line sums.
// Values are drawn in [-9, 9] (residues in [0, p) over F_p), table values in
// sorted point order first, then the bumped line / line values in line order.
inline RandomInstance random_instance(std::uint64_t seed, const RegionSpec& region_spec,
                                      const std::vector<Direction>& dirs, InstanceMode mode,
                                      const RingSpec& ring) {
  require_pairwise_independent(dirs);
  require_primitive(dirs);
  RandomInstance inst(ring);
  inst.dirs = dirs;
  inst.region = region_spec.realize();
  SplitMix64 rng(seed);
  auto draw = [&]() -> Rat {
    if (ring.kind() == RingKind::PrimeField) {
      Int p = ring.modulus();
      std::int64_t hi = p > 1000000 ? 1000000 : p.convert_to<std::int64_t>();
      return Rat(rng.range(0, hi - 1));
    }
    return Rat(rng.range(-9, 9));
  };

  if (mode == InstanceMode::Uniform) {
    for (const LineId& l : enumerate_lines(inst.region, dirs)) inst.line_sums.add(l, draw());
    return inst;
  }

  Table f(ring);
  for (const Point& p : inst.region) f.add(p, draw());
  inst.table = f;
  inst.line_sums = project(f, dirs);
  if (mode == InstanceMode::Perturbed) {
    std::vector<LineId> lines = enumerate_lines(inst.region, dirs);
    std::size_t k = static_cast<std::size_t>(rng.range(0, static_cast<std::int64_t>(lines.size()) - 1));
    inst.line_sums.add(lines[k], Rat(1));
  }
  return inst;
}

}  // namespace linesum
