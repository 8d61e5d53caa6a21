#include "ctb/target_set.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>

#include "ctb/lp.hpp"
#include "ctb/rng.hpp"
#include "ctb/special.hpp"

namespace ctb {

using nlohmann::json;

nlohmann::json TargetSet::to_json() const {
  throw ValidationError("target kind '" + kind() + "' is not serializable");
}

bool TargetSet::in_dilation(const Vec&, double) const {
  throw ValidationError("target kind '" + kind() +
                        "' has no analytic dilation test");
}

bool TargetSet::in_erosion(const Vec&, double) const {
  throw ValidationError("target kind '" + kind() +
                        "' has no analytic erosion test");
}

std::int64_t TargetSet::count_disagreements(
    const Mat& points, const std::vector<char>& labels) const {
  std::int64_t bad = 0;
  for (Index i = 0; i < points.cols(); ++i) {
    const bool inside = contains(points.col(i));
    if (inside != static_cast<bool>(labels[static_cast<std::size_t>(i)])) {
      ++bad;
    }
  }
  return bad;
}

json EmptySet::to_json() const { return json{{"kind", "empty"}}; }

json FullSpaceSet::to_json() const { return json{{"kind", "full_space"}}; }

BallSet::BallSet(int n, double radius, Vec center)
    : n_(n), radius_(radius), center_(std::move(center)) {
  if (n < 1) throw ValidationError("ball: n >= 1 required");
  if (radius < 0.0) throw ValidationError("ball: radius >= 0 required");
  if (center_.size() == 0) center_ = Vec::Zero(n);
  if (center_.size() != n) throw ValidationError("ball: center dim mismatch");
}

bool BallSet::contains(const Vec& x) const {
  return (x - center_).norm() <= radius_;
}

bool BallSet::in_dilation(const Vec& x, double h) const {
  return (x - center_).norm() <= radius_ + h;
}

bool BallSet::in_erosion(const Vec& x, double h) const {
  return (x - center_).norm() <= radius_ - h;
}

json BallSet::to_json() const {
  return json{{"kind", "ball"},
              {"n", n_},
              {"radius", radius_},
              {"center", std::vector<double>(center_.begin(), center_.end())}};
}

HalfspaceIntersectionSet::HalfspaceIntersectionSet(Mat normals, Vec offsets)
    : normals_(std::move(normals)), offsets_(std::move(offsets)) {
  if (normals_.cols() != offsets_.size()) {
    throw ValidationError("halfspace_intersection: normals/offsets mismatch");
  }
  for (Index j = 0; j < normals_.cols(); ++j) {
    const double len = normals_.col(j).norm();
    if (len <= 0.0) {
      throw ValidationError("halfspace_intersection: zero normal");
    }
    normals_.col(j) /= len;
    offsets_[j] /= len;
  }
}

bool HalfspaceIntersectionSet::contains(const Vec& x) const {
  for (Index j = 0; j < normals_.cols(); ++j) {
    if (normals_.col(j).dot(x) > offsets_[j]) return false;
  }
  return true;
}

bool HalfspaceIntersectionSet::in_erosion(const Vec& x, double h) const {
  for (Index j = 0; j < normals_.cols(); ++j) {
    if (normals_.col(j).dot(x) > offsets_[j] - h) return false;
  }
  return true;
}

double HalfspaceIntersectionSet::exterior_distance(const Vec& x) const {
  // Dykstra's alternating projections onto the halfspaces.
  const Index k = normals_.cols();
  Vec y = x;
  Mat corrections = Mat::Zero(x.size(), k);
  const int max_sweeps = 4000;
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    double moved = 0.0;
    for (Index j = 0; j < k; ++j) {
      const Vec z = y + corrections.col(j);
      const double viol = normals_.col(j).dot(z) - offsets_[j];
      Vec projected = z;
      if (viol > 0.0) projected -= viol * normals_.col(j);
      corrections.col(j) = z - projected;
      moved += (projected - y).norm();
      y = projected;
    }
    if (moved <= 1e-13 * (1.0 + x.norm())) break;
  }
  return (x - y).norm();
}

bool HalfspaceIntersectionSet::in_dilation(const Vec& x, double h) const {
  double max_viol = 0.0;
  for (Index j = 0; j < normals_.cols(); ++j) {
    max_viol = std::max(max_viol, normals_.col(j).dot(x) - offsets_[j]);
  }
  if (max_viol <= 0.0) return true;  // inside
  if (max_viol > h) return false;    // each halfspace contains C
  return exterior_distance(x) <= h;
}

json HalfspaceIntersectionSet::to_json() const {
  std::vector<std::vector<double>> normals;
  for (Index j = 0; j < normals_.cols(); ++j) {
    normals.emplace_back(normals_.col(j).begin(), normals_.col(j).end());
  }
  return json{{"kind", "halfspace_intersection"},
              {"normals", normals},
              {"offsets", std::vector<double>(offsets_.begin(), offsets_.end())}};
}

RandomPolytopeSet RandomPolytopeSet::sample(int n,
                                            std::int64_t halfspace_count,
                                            double r, std::uint64_t seed) {
  if (n < 1 || halfspace_count < 1 || !(r > 0.0)) {
    throw ValidationError("random_polytope: require n >= 1, N >= 1, r > 0");
  }
  RngStream stream(seed);
  Mat y(n, halfspace_count);
  for (Index j = 0; j < halfspace_count; ++j) {
    y.col(j) = stream.next_sphere_point(n, r);
  }
  return RandomPolytopeSet(std::move(y), r, seed);
}

RandomPolytopeSet::RandomPolytopeSet(Mat sphere_normals, double r,
                                     std::uint64_t seed)
    : HalfspaceIntersectionSet(sphere_normals,
                               Vec::Constant(sphere_normals.cols(), r * r)),
      sphere_normals_(std::move(sphere_normals)),
      r_(r),
      seed_(seed) {}

json RandomPolytopeSet::to_json() const {
  return json{{"kind", "random_polytope"},
              {"n", static_cast<int>(sphere_normals_.rows())},
              {"halfspace_count", static_cast<std::int64_t>(sphere_normals_.cols())},
              {"r", r_},
              {"seed", seed_}};
}

StripeSet::StripeSet(int n, int intervals) : n_(n), intervals_(intervals) {
  if (n < 1) throw ValidationError("stripe: n >= 1 required");
  if (intervals < 1) throw ValidationError("stripe: intervals >= 1 required");
  thresholds_.reserve(static_cast<std::size_t>(intervals));
  for (int i = 1; i <= intervals; ++i) {
    thresholds_.push_back(
        normal_quantile(static_cast<double>(i) / (intervals + 1)));
  }
}

bool StripeSet::contains(const Vec& x) const {
  const double x1 = x[0];
  // index of the slab tau_i <= x1 < tau_{i+1}, with tau_0 = -infinity
  const auto it =
      std::upper_bound(thresholds_.begin(), thresholds_.end(), x1);
  const auto slab = static_cast<int>(it - thresholds_.begin());
  return slab % 2 == 0;
}

json StripeSet::to_json() const {
  return json{{"kind", "stripe"}, {"n", n_}, {"intervals", intervals_}};
}

ShellUnionSet::ShellUnionSet(int n, std::vector<double> boundaries,
                             std::vector<char> included)
    : n_(n),
      boundaries_(std::move(boundaries)),
      included_(std::move(included)) {
  if (boundaries_.size() != included_.size() + 1 || included_.empty()) {
    throw ValidationError("shell_union: need M+1 boundaries for M shells");
  }
  if (!std::is_sorted(boundaries_.begin(), boundaries_.end())) {
    throw ValidationError("shell_union: boundaries must be increasing");
  }
}

bool ShellUnionSet::contains(const Vec& x) const {
  const double radius = x.norm();
  if (radius > boundaries_.back()) return false;
  // shell i covers (t_{i-1}, t_i]; radius 0 lands in shell 1
  auto it = std::lower_bound(boundaries_.begin() + 1, boundaries_.end(), radius);
  const auto shell = static_cast<std::size_t>(it - (boundaries_.begin() + 1));
  return static_cast<bool>(included_[shell]);
}

json ShellUnionSet::to_json() const {
  return json{{"kind", "shell_union"},
              {"n", n_},
              {"boundaries", boundaries_},
              {"included", std::vector<int>(included_.begin(), included_.end())}};
}

CubeHullSet::CubeHullSet(Mat corners) : corners_(std::move(corners)) {
  if (corners_.cols() > 0) {
    bbox_lo_ = corners_.rowwise().minCoeff();
    bbox_hi_ = corners_.rowwise().maxCoeff();
  }
}

bool CubeHullSet::contains(const Vec& x) const {
  if (corners_.cols() == 0) return false;
  const double tol = 1e-9;
  for (Index i = 0; i < x.size(); ++i) {
    if (x[i] < bbox_lo_[i] - tol || x[i] > bbox_hi_[i] + tol) return false;
  }
  if (corners_.rows() == 1) return true;  // 1-D hull is exactly its bbox
  return conv_membership(x, corners_);
}

std::int64_t CubeHullSet::count_disagreements(
    const Mat& points, const std::vector<char>& labels) const {
  if (corners_.rows() == 1 && corners_.cols() > 0) {
    const double lo = bbox_lo_[0] - 1e-9;
    const double hi = bbox_hi_[0] + 1e-9;
    std::int64_t bad = 0;
    for (Index i = 0; i < points.cols(); ++i) {
      const double v = points(0, i);
      const bool inside = v >= lo && v <= hi;
      if (inside != static_cast<bool>(labels[static_cast<std::size_t>(i)])) {
        ++bad;
      }
    }
    return bad;
  }
  return TargetSet::count_disagreements(points, labels);
}

json CubeHullSet::to_json() const {
  std::vector<std::vector<double>> corners;
  for (Index j = 0; j < corners_.cols(); ++j) {
    corners.emplace_back(corners_.col(j).begin(), corners_.col(j).end());
  }
  return json{{"kind", "cube_hull"},
              {"n", static_cast<int>(corners_.rows())},
              {"corners", corners}};
}

namespace {

Mat mat_from_columns(const json& cols, const char* what) {
  if (!cols.is_array() || cols.empty()) {
    throw ValidationError(std::string(what) + ": non-empty array required");
  }
  const auto n = cols.front().size();
  Mat m(n, cols.size());
  Index j = 0;
  for (const auto& col : cols) {
    if (col.size() != n) {
      throw ValidationError(std::string(what) + ": ragged columns");
    }
    for (std::size_t i = 0; i < n; ++i) {
      m(static_cast<Index>(i), j) = col.at(i).get<double>();
    }
    ++j;
  }
  return m;
}

}  // namespace

TargetPtr target_from_json(const json& spec) {
  if (!spec.is_object() || !spec.contains("kind")) {
    throw ValidationError("target spec must be an object with a 'kind' key");
  }
  const std::string kind = spec.at("kind").get<std::string>();
  if (kind == "empty") return std::make_unique<EmptySet>();
  if (kind == "full_space") return std::make_unique<FullSpaceSet>();
  if (kind == "ball") {
    const int n = spec.at("n").get<int>();
    Vec center;
    if (spec.contains("center")) {
      const auto c = spec.at("center").get<std::vector<double>>();
      center = Eigen::Map<const Vec>(c.data(), static_cast<Index>(c.size()));
    }
    return std::make_unique<BallSet>(n, spec.at("radius").get<double>(),
                                     std::move(center));
  }
  if (kind == "halfspace_intersection") {
    Mat normals = mat_from_columns(spec.at("normals"), "normals");
    const auto off = spec.at("offsets").get<std::vector<double>>();
    Vec offsets =
        Eigen::Map<const Vec>(off.data(), static_cast<Index>(off.size()));
    return std::make_unique<HalfspaceIntersectionSet>(std::move(normals),
                                                      std::move(offsets));
  }
  if (kind == "random_polytope") {
    return std::make_unique<RandomPolytopeSet>(RandomPolytopeSet::sample(
        spec.at("n").get<int>(), spec.at("halfspace_count").get<std::int64_t>(),
        spec.at("r").get<double>(), spec.at("seed").get<std::uint64_t>()));
  }
  if (kind == "stripe") {
    return std::make_unique<StripeSet>(spec.at("n").get<int>(),
                                       spec.at("intervals").get<int>());
  }
  if (kind == "shell_union") {
    const auto inc = spec.at("included").get<std::vector<int>>();
    return std::make_unique<ShellUnionSet>(
        spec.at("n").get<int>(),
        spec.at("boundaries").get<std::vector<double>>(),
        std::vector<char>(inc.begin(), inc.end()));
  }
  if (kind == "cube_hull") {
    if (spec.contains("corners") && !spec.at("corners").empty()) {
      return std::make_unique<CubeHullSet>(
          mat_from_columns(spec.at("corners"), "corners"));
    }
    return std::make_unique<CubeHullSet>(Mat(spec.value("n", 1), 0));
  }
  throw ValidationError("unknown target kind '" + kind + "'");
}

}  // namespace ctb
