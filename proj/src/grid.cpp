#include "ctb/grid.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <set>

#include "ctb/lp.hpp"
#include "ctb/special.hpp"

namespace ctb {

GridParams GridParams::make(int n, double epsilon,
                            std::optional<double> ell_override,
                            std::optional<double> n_prime_override,
                            std::int64_t cube_cap) {
  if (n < 1) throw ValidationError("grid: n >= 1 required");
  if (!(epsilon > 0.0 && epsilon < 1.0)) {
    throw ValidationError("grid: epsilon in (0,1) required");
  }
  GridParams p;
  p.n = n;
  p.epsilon = epsilon;
  p.cube_cap = cube_cap;
  if (ell_override) {
    p.ell = *ell_override;
    p.ell_overridden = true;
  } else {
    p.ell = std::pow(epsilon, 3) / std::pow(static_cast<double>(n), 4);
  }
  if (n_prime_override) {
    p.n_prime = *n_prime_override;
    p.n_prime_overridden = true;
  } else {
    p.n_prime = std::sqrt(n + 4.0 * std::sqrt(n * std::log(4.0 / epsilon)));
  }
  if (!(p.ell > 0.0)) throw ValidationError("grid: ell > 0 required");
  if (!(p.n_prime > 0.0)) throw ValidationError("grid: n_prime > 0 required");
  return p;
}

namespace {

// Squared distance from the origin to the closed cube at lattice position i
// along one axis: zero when the interval [i*ell - ell/2, i*ell + ell/2]
// straddles zero.
double axis_nearest_sq(std::int32_t i, double ell) {
  const double lo = i * ell - 0.5 * ell;
  const double hi = i * ell + 0.5 * ell;
  if (lo <= 0.0 && 0.0 <= hi) return 0.0;
  const double d = (lo > 0.0) ? lo : -hi;
  return d * d;
}

}  // namespace

Grid Grid::build(const GridParams& params) {
  Grid grid(params);
  const double reach = 2.0 * params.n_prime;
  const double max_index_real = std::floor((reach + 0.5 * params.ell) / params.ell);
  if (max_index_real > 2.0e9) {
    const double per_axis = 2.0 * max_index_real + 1.0;
    throw InfeasibleError("grid infeasible: per-axis index range overflows",
                          std::pow(per_axis, params.n));
  }
  const auto max_index = static_cast<std::int32_t>(max_index_real);
  grid.axis_index_max_ = max_index;
  // Cubes inside the inscribed L-infinity box are all members, so their
  // count lower-bounds the CubeSet size; fail fast on hopeless parameters
  // instead of enumerating toward the cap.
  const double inner_half = reach / std::sqrt(static_cast<double>(params.n));
  const double inner_per_axis =
      2.0 * std::floor((inner_half + 0.5 * params.ell) / params.ell) + 1.0;
  const double lower_count = std::pow(inner_per_axis, params.n);
  if (lower_count > static_cast<double>(params.cube_cap)) {
    throw InfeasibleError("grid infeasible at these parameters", lower_count);
  }

  const double reach_sq = reach * reach;
  CubeIndex cube;
  cube.coords.assign(static_cast<std::size_t>(params.n), 0);
  std::int64_t count = 0;
  double total = 0.0;
  double min_mass = std::numeric_limits<double>::infinity();

  // Depth-first sweep with the partial squared distance carried along.
  std::function<void(int, double, double)> sweep = [&](int axis, double dist_sq,
                                                       double mass) {
    if (axis == params.n) {
      ++count;
      if (count > params.cube_cap) {
        throw InfeasibleError("grid infeasible at these parameters",
                              static_cast<double>(count));
      }
      total += mass;
      min_mass = std::min(min_mass, mass);
      return;
    }
    for (std::int32_t i = -max_index; i <= max_index; ++i) {
      const double d = axis_nearest_sq(i, params.ell);
      if (dist_sq + d > reach_sq) continue;
      const double lo = i * params.ell - 0.5 * params.ell;
      const double hi = lo + params.ell;
      const double axis_mass = normal_cdf(hi) - normal_cdf(lo);
      cube.coords[static_cast<std::size_t>(axis)] = i;
      sweep(axis + 1, dist_sq + d, mass * axis_mass);
    }
  };
  sweep(0, 0.0, 1.0);

  grid.cube_count_ = count;
  grid.total_mass_ = total;
  grid.min_cube_mass_ = min_mass;
  return grid;
}

double Grid::cube_mass(const CubeIndex& cube) const {
  double mass = 1.0;
  for (const std::int32_t i : cube.coords) {
    const double lo = i * params_.ell - 0.5 * params_.ell;
    mass *= normal_cdf(lo + params_.ell) - normal_cdf(lo);
  }
  return mass;
}

bool Grid::in_cube_set(const CubeIndex& cube) const {
  double dist_sq = 0.0;
  const double reach = 2.0 * params_.n_prime;
  for (const std::int32_t i : cube.coords) {
    dist_sq += axis_nearest_sq(i, params_.ell);
    if (dist_sq > reach * reach) return false;
  }
  return true;
}

bool Grid::locate_into(const Vec& x, CubeIndex& cube) const {
  for (Index a = 0; a < x.size(); ++a) {
    const double idx = std::floor(x[a] / params_.ell + 0.5);
    if (std::abs(idx) > static_cast<double>(axis_index_max_)) return false;
    cube.coords[static_cast<std::size_t>(a)] = static_cast<std::int32_t>(idx);
  }
  return in_cube_set(cube);
}

std::optional<CubeIndex> Grid::locate(const Vec& x) const {
  CubeIndex cube;
  cube.coords.resize(static_cast<std::size_t>(x.size()));
  if (!locate_into(x, cube)) return std::nullopt;
  return cube;
}

Mat Grid::cube_corners(const CubeIndex& cube) const {
  const int n = params_.n;
  const Index corners = Index{1} << n;
  Mat out(n, corners);
  for (Index mask = 0; mask < corners; ++mask) {
    for (int a = 0; a < n; ++a) {
      const double center = cube.coords[static_cast<std::size_t>(a)] * params_.ell;
      const double sign = (mask >> a) & 1 ? 0.5 : -0.5;
      out(a, mask) = center + sign * params_.ell;
    }
  }
  return out;
}

void Grid::for_each_cube(
    const std::function<void(const CubeIndex&)>& fn) const {
  const double reach = 2.0 * params_.n_prime;
  const double reach_sq = reach * reach;
  CubeIndex cube;
  cube.coords.assign(static_cast<std::size_t>(params_.n), 0);
  std::function<void(int, double)> sweep = [&](int axis, double dist_sq) {
    if (axis == params_.n) {
      fn(cube);
      return;
    }
    for (std::int32_t i = -axis_index_max_; i <= axis_index_max_; ++i) {
      const double d = axis_nearest_sq(i, params_.ell);
      if (dist_sq + d > reach_sq) continue;
      cube.coords[static_cast<std::size_t>(axis)] = i;
      sweep(axis + 1, dist_sq + d);
    }
  };
  sweep(0, 0.0);
}

std::vector<CubeIndex> Grid::list_cubes() const {
  std::vector<CubeIndex> out;
  out.reserve(static_cast<std::size_t>(cube_count_));
  for_each_cube([&](const CubeIndex& c) { out.push_back(c); });
  return out;
}

CubeClass CubeClassification::class_of(const CubeIndex& cube) const {
  const auto it = positive_cubes.find(cube);
  if (it == positive_cubes.end()) return CubeClass::kExternal;
  return it->second;
}

CubeClassification classify_cubes(const Grid& grid,
                                  const std::vector<LabeledSample>& samples) {
  if (samples.empty()) {
    return classify_cubes(grid, Mat(grid.params().n, 0), {});
  }
  Mat points(samples.front().x.size(), static_cast<Index>(samples.size()));
  std::vector<char> labels(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) {
    points.col(static_cast<Index>(i)) = samples[i].x;
    labels[i] = samples[i].label ? 1 : 0;
  }
  return classify_cubes(grid, points, labels);
}

CubeClassification classify_cubes(const Grid& grid, const Mat& points,
                                  const std::vector<char>& labels) {
  CubeClassification out;
  out.total_cubes = grid.cube_count();

  std::unordered_set<CubeIndex, CubeIndexHash> pos, neg;
  Vec buf(points.rows());
  CubeIndex cube;
  cube.coords.resize(static_cast<std::size_t>(points.rows()));
  for (Index i = 0; i < points.cols(); ++i) {
    buf = points.col(i);
    if (!grid.locate_into(buf, cube)) continue;  // outside the grid: ignored
    if (labels[static_cast<std::size_t>(i)]) {
      pos.insert(cube);
    } else {
      neg.insert(cube);
    }
  }
  std::int64_t occupied = static_cast<std::int64_t>(pos.size());
  for (const CubeIndex& c : neg) {
    if (pos.count(c) == 0) ++occupied;
  }
  out.occupied_cubes = occupied;

  const int n = grid.params().n;
  CubeIndex probe;
  probe.coords.resize(static_cast<std::size_t>(n));
  for (const CubeIndex& cube : pos) {
    // Chebyshev neighborhood scan, the cube itself included.
    bool boundary = false;
    std::function<void(int)> scan = [&](int axis) {
      if (boundary) return;
      if (axis == n) {
        if (neg.count(probe) > 0) boundary = true;
        return;
      }
      for (int d = -1; d <= 1; ++d) {
        probe.coords[static_cast<std::size_t>(axis)] =
            cube.coords[static_cast<std::size_t>(axis)] + d;
        scan(axis + 1);
      }
    };
    scan(0);
    const double mass = grid.cube_mass(cube);
    if (boundary) {
      out.positive_cubes.emplace(cube, CubeClass::kBoundary);
      out.bc_mass += mass;
    } else {
      out.positive_cubes.emplace(cube, CubeClass::kInternal);
      out.ic_mass += mass;
    }
  }
  out.ec_mass = grid.total_mass() - out.bc_mass - out.ic_mass;
  return out;
}

ContainmentReport internal_cube_containment_check(
    const Grid& grid, const std::vector<LabeledSample>& samples) {
  ContainmentReport report;
  const CubeClassification classes = classify_cubes(grid, samples);
  if (!classes.all_cubes_occupied()) {
    report.outcome = ContainmentOutcome::kHypothesisViolated;
    return report;
  }
  std::int64_t n_pos = 0;
  for (const LabeledSample& s : samples) {
    if (s.label && grid.locate(s.x)) ++n_pos;
  }
  Mat positives(grid.params().n, n_pos);
  Index col = 0;
  for (const LabeledSample& s : samples) {
    if (s.label && grid.locate(s.x)) positives.col(col++) = s.x;
  }
  for (const auto& [cube, cls] : classes.positive_cubes) {
    if (cls != CubeClass::kInternal) continue;
    ++report.internal_cubes_checked;
    const Mat corners = grid.cube_corners(cube);
    for (Index j = 0; j < corners.cols(); ++j) {
      ++report.corners_checked;
      if (!conv_membership(corners.col(j).eval(), positives)) {
        report.outcome = ContainmentOutcome::kViolation;
        report.violating_cube = cube;
        return report;
      }
    }
  }
  return report;
}

namespace {

// Corners of cube unions are half-integer lattice points: represent each
// corner exactly as the integer vector of doubled lattice coordinates.
using IntCorner = std::vector<std::int64_t>;

}  // namespace

std::vector<CubeHullSet> generate_cover(const Grid& grid,
                                        std::int64_t subset_cap,
                                        CoverMode mode) {
  const std::vector<CubeIndex> cubes = grid.list_cubes();
  const auto k = static_cast<std::int64_t>(cubes.size());
  const int n = grid.params().n;
  const double ell = grid.params().ell;

  std::vector<std::vector<std::int64_t>> subsets;
  if (mode == CoverMode::kContiguous1D) {
    if (n != 1) {
      throw ValidationError("contiguous cover enumeration requires n = 1");
    }
    subsets.push_back({});
    for (std::int64_t lo = 0; lo < k; ++lo) {
      for (std::int64_t hi = lo; hi < k; ++hi) {
        std::vector<std::int64_t> subset;
        for (std::int64_t j = lo; j <= hi; ++j) subset.push_back(j);
        subsets.push_back(std::move(subset));
      }
    }
  } else {
    if (k >= 62 || (std::int64_t{1} << k) > subset_cap) {
      throw InfeasibleError("cover enumeration infeasible: 2^|CubeSet| "
                            "exceeds the subset cap",
                            k >= 62 ? std::pow(2.0, static_cast<double>(k))
                                    : static_cast<double>(std::int64_t{1} << k));
    }
    const std::int64_t total = std::int64_t{1} << k;
    subsets.reserve(static_cast<std::size_t>(total));
    for (std::int64_t mask = 0; mask < total; ++mask) {
      std::vector<std::int64_t> subset;
      for (std::int64_t j = 0; j < k; ++j) {
        if ((mask >> j) & 1) subset.push_back(j);
      }
      subsets.push_back(std::move(subset));
    }
  }

  std::set<std::vector<IntCorner>> seen;
  std::vector<CubeHullSet> cover;
  for (const auto& subset : subsets) {
    std::set<IntCorner> corner_set;
    for (const std::int64_t ci : subset) {
      const CubeIndex& cube = cubes[static_cast<std::size_t>(ci)];
      const Index corners = Index{1} << n;
      for (Index mask = 0; mask < corners; ++mask) {
        IntCorner corner(static_cast<std::size_t>(n));
        for (int a = 0; a < n; ++a) {
          const std::int64_t doubled =
              2LL * cube.coords[static_cast<std::size_t>(a)] +
              (((mask >> a) & 1) ? 1 : -1);
          corner[static_cast<std::size_t>(a)] = doubled;
        }
        corner_set.insert(std::move(corner));
      }
    }
    std::vector<IntCorner> key(corner_set.begin(), corner_set.end());
    if (!seen.insert(key).second) continue;
    Mat corners(n, static_cast<Index>(key.size()));
    Index col = 0;
    for (const IntCorner& c : key) {
      for (int a = 0; a < n; ++a) {
        corners(a, col) = 0.5 * ell * static_cast<double>(c[static_cast<std::size_t>(a)]);
      }
      ++col;
    }
    cover.emplace_back(std::move(corners));
  }
  return cover;
}

void write_classification_csv(const Grid& grid,
                              const CubeClassification& classification,
                              std::ostream& out) {
  out << "index,class,mass\n";
  grid.for_each_cube([&](const CubeIndex& cube) {
    for (std::size_t a = 0; a < cube.coords.size(); ++a) {
      out << (a ? ";" : "") << cube.coords[a];
    }
    const CubeClass cls = classification.class_of(cube);
    const char* name = cls == CubeClass::kExternal   ? "external"
                       : cls == CubeClass::kBoundary ? "boundary"
                                                     : "internal";
    out << "," << name << "," << grid.cube_mass(cube) << "\n";
  });
}

}  // namespace ctb
