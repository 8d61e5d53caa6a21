#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "ctb/target_set.hpp"
#include "ctb/types.hpp"

namespace ctb {

/// Lattice parameters. Defaults derive ell = eps^3 / n^4 and
/// n' = sqrt(n + 4 sqrt(n ln(4/eps))); both can be overridden for
/// desk-scale experiments (the derived values are astronomically fine).
struct GridParams {
  int n = 1;
  double epsilon = 0.1;
  double ell = 0.0;
  double n_prime = 0.0;
  std::int64_t cube_cap = 10'000'000;
  bool ell_overridden = false;
  bool n_prime_overridden = false;

  static GridParams make(int n, double epsilon,
                         std::optional<double> ell_override = std::nullopt,
                         std::optional<double> n_prime_override = std::nullopt,
                         std::int64_t cube_cap = 10'000'000);
};

/// Integer lattice coordinates of a cube: the cube is
/// [-ell/2, ell/2)^n + ell * coords.
struct CubeIndex {
  std::vector<std::int32_t> coords;
  bool operator==(const CubeIndex& o) const { return coords == o.coords; }
};

struct CubeIndexHash {
  std::size_t operator()(const CubeIndex& c) const {
    std::size_t h = 0xcbf29ce484222325ULL;
    for (const std::int32_t v : c.coords) {
      h ^= static_cast<std::size_t>(static_cast<std::uint32_t>(v));
      h *= 0x100000001b3ULL;
    }
    return h;
  }
};

/// The cube lattice restricted to cubes meeting Ball(2 n'). Built by a
/// single streaming enumeration; only counts and mass aggregates are
/// materialized. Explicit cube lists are produced on demand (and only
/// make sense for small grids).
class Grid {
 public:
  static Grid build(const GridParams& params);

  const GridParams& params() const { return params_; }
  std::int64_t cube_count() const { return cube_count_; }
  double total_mass() const { return total_mass_; }
  double min_cube_mass() const { return min_cube_mass_; }

  /// Gaussian mass of one cube: product of per-axis normal CDF increments.
  double cube_mass(const CubeIndex& cube) const;

  /// Whether the cube belongs to the CubeSet (meets Ball(2 n')).
  bool in_cube_set(const CubeIndex& cube) const;

  /// The cube containing x, or nullopt when that cube is outside the set.
  std::optional<CubeIndex> locate(const Vec& x) const;

  /// Allocation-free variant for hot loops: writes into cube (which must
  /// already have n coordinates) and reports membership in the CubeSet.
  bool locate_into(const Vec& x, CubeIndex& cube) const;

  /// All 2^n corner points of a cube, one per column.
  Mat cube_corners(const CubeIndex& cube) const;

  /// Streaming enumeration of the CubeSet in lexicographic order.
  void for_each_cube(const std::function<void(const CubeIndex&)>& fn) const;

  /// Materialized cube list (small grids only).
  std::vector<CubeIndex> list_cubes() const;

 private:
  explicit Grid(GridParams params) : params_(std::move(params)) {}
  GridParams params_;
  std::int64_t cube_count_ = 0;
  double total_mass_ = 0.0;
  double min_cube_mass_ = 1.0;
  std::int32_t axis_index_max_ = 0;
};

enum class CubeClass { kExternal, kBoundary, kInternal };

/// Sample-driven classification: external (no positive point), boundary
/// (positive and Chebyshev-adjacent, including itself, to a cube holding a
/// negative point), internal (positive, not boundary). External cubes are
/// implicit; only positive cubes are materialized.
struct CubeClassification {
  std::unordered_map<CubeIndex, CubeClass, CubeIndexHash> positive_cubes;
  std::int64_t total_cubes = 0;
  std::int64_t occupied_cubes = 0;
  double bc_mass = 0.0;
  double ic_mass = 0.0;
  double ec_mass = 0.0;

  bool all_cubes_occupied() const { return occupied_cubes == total_cubes; }
  CubeClass class_of(const CubeIndex& cube) const;
};

/// Classifies every cube of the grid given labeled samples. Samples whose
/// cube lies outside the CubeSet are ignored.
CubeClassification classify_cubes(const Grid& grid,
                                  const std::vector<LabeledSample>& samples);

/// Columnar overload for large sample sets: one point per column.
CubeClassification classify_cubes(const Grid& grid, const Mat& points,
                                  const std::vector<char>& labels);

/// Outcome of the internal-cube containment check.
enum class ContainmentOutcome {
  kAllContained,
  kViolation,
  kHypothesisViolated,  // some cube holds no sample; the lemma's premise fails
};

struct ContainmentReport {
  ContainmentOutcome outcome = ContainmentOutcome::kAllContained;
  std::int64_t internal_cubes_checked = 0;
  std::int64_t corners_checked = 0;
  std::optional<CubeIndex> violating_cube;
};

/// Verifies that every internal cube lies in Conv(T+) by testing all 2^n
/// corners with the LP membership oracle. Requires every cube to hold a
/// sample; otherwise reports hypothesis violation rather than failure.
ContainmentReport internal_cube_containment_check(
    const Grid& grid, const std::vector<LabeledSample>& samples);

enum class CoverMode { kFull, kContiguous1D };

/// Hulls of unions of cube subsets: the finite cover family. Elements are
/// deduplicated by corner-set equality. Throws InfeasibleError when the
/// subset count exceeds subset_cap (full mode).
std::vector<CubeHullSet> generate_cover(const Grid& grid,
                                        std::int64_t subset_cap = 1 << 20,
                                        CoverMode mode = CoverMode::kFull);

/// CSV export: one row per cube, columns index/class/mass.
void write_classification_csv(const Grid& grid,
                              const CubeClassification& classification,
                              std::ostream& out);

}  // namespace ctb
