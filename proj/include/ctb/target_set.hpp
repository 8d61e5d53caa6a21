#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include <json.hpp>

#include "ctb/types.hpp"

namespace ctb {

/// A membership oracle for a measurable S in R^n. Oracles are immutable
/// after construction and safe for concurrent evaluation.
///
/// Convex kinds additionally expose analytic dilation / erosion membership:
///   in_dilation(x, h)  <=>  dist(x, S) <= h          (x in S + Ball(h))
///   in_erosion(x, h)   <=>  Ball(x, h) is inside S
/// so that x lies in the h-thickened boundary iff
/// in_dilation(x, h) && !in_erosion(x, h).
class TargetSet {
 public:
  virtual ~TargetSet() = default;

  virtual bool contains(const Vec& x) const = 0;
  virtual int dim() const = 0;  // 0 = dimension-agnostic (empty / full space)
  virtual bool is_convex() const = 0;
  virtual std::string kind() const = 0;
  virtual nlohmann::json to_json() const;

  virtual bool supports_dilation() const { return false; }
  virtual bool in_dilation(const Vec& x, double h) const;
  virtual bool in_erosion(const Vec& x, double h) const;

  /// Number of points whose label disagrees with this oracle. labels[i]
  /// corresponds to points.col(i). Overridden where a batch fast path
  /// exists (the ERM scoring loop).
  virtual std::int64_t count_disagreements(
      const Mat& points, const std::vector<char>& labels) const;
};

using TargetPtr = std::unique_ptr<TargetSet>;

class EmptySet final : public TargetSet {
 public:
  bool contains(const Vec&) const override { return false; }
  int dim() const override { return 0; }
  bool is_convex() const override { return true; }
  std::string kind() const override { return "empty"; }
  nlohmann::json to_json() const override;
  bool supports_dilation() const override { return true; }
  bool in_dilation(const Vec&, double) const override { return false; }
  bool in_erosion(const Vec&, double) const override { return false; }
};

class FullSpaceSet final : public TargetSet {
 public:
  bool contains(const Vec&) const override { return true; }
  int dim() const override { return 0; }
  bool is_convex() const override { return true; }
  std::string kind() const override { return "full_space"; }
  nlohmann::json to_json() const override;
  bool supports_dilation() const override { return true; }
  bool in_dilation(const Vec&, double) const override { return true; }
  bool in_erosion(const Vec&, double) const override { return true; }
};

class BallSet final : public TargetSet {
 public:
  BallSet(int n, double radius, Vec center = Vec());
  bool contains(const Vec& x) const override;
  int dim() const override { return n_; }
  bool is_convex() const override { return true; }
  std::string kind() const override { return "ball"; }
  nlohmann::json to_json() const override;
  bool supports_dilation() const override { return true; }
  bool in_dilation(const Vec& x, double h) const override;
  bool in_erosion(const Vec& x, double h) const override;
  double radius() const { return radius_; }
  const Vec& center() const { return center_; }

 private:
  int n_;
  double radius_;
  Vec center_;
};

/// Intersection of closed halfspaces a_j . x <= b_j with unit normals
/// (normalized at construction).
class HalfspaceIntersectionSet : public TargetSet {
 public:
  HalfspaceIntersectionSet(Mat normals, Vec offsets);
  bool contains(const Vec& x) const override;
  int dim() const override { return static_cast<int>(normals_.rows()); }
  bool is_convex() const override { return true; }
  std::string kind() const override { return "halfspace_intersection"; }
  nlohmann::json to_json() const override;
  bool supports_dilation() const override { return true; }
  bool in_dilation(const Vec& x, double h) const override;
  bool in_erosion(const Vec& x, double h) const override;
  const Mat& unit_normals() const { return normals_; }
  const Vec& offsets() const { return offsets_; }

 protected:
  /// Euclidean distance from an exterior point to the intersection, by
  /// Dykstra's cyclic projection (halfspace projections are exact).
  double exterior_distance(const Vec& x) const;

 private:
  Mat normals_;  // unit normals, one per column
  Vec offsets_;
};

/// The random polytope of the yes-distribution: N outward normals drawn
/// uniformly on the sphere of radius r; membership is x . y_i <= r^2 for
/// all i. Reconstructible bit-for-bit from (n, N, r, seed).
class RandomPolytopeSet final : public HalfspaceIntersectionSet {
 public:
  static RandomPolytopeSet sample(int n, std::int64_t halfspace_count,
                                  double r, std::uint64_t seed);
  std::string kind() const override { return "random_polytope"; }
  nlohmann::json to_json() const override;
  /// The sphere points y_i, one per column (norm r each).
  const Mat& sphere_normals() const { return sphere_normals_; }
  double r() const { return r_; }
  std::uint64_t seed() const { return seed_; }

 private:
  RandomPolytopeSet(Mat sphere_normals, double r, std::uint64_t seed);
  Mat sphere_normals_;
  double r_;
  std::uint64_t seed_;
};

/// The axis-aligned stripe construction: thresholds tau_i with
/// Pr[z <= tau_i] = i/(N+1); label is 1 on even-indexed slabs of x_1.
/// Far from convex by design; used as the canonical non-convex target.
class StripeSet final : public TargetSet {
 public:
  StripeSet(int n, int intervals);
  bool contains(const Vec& x) const override;
  int dim() const override { return n_; }
  bool is_convex() const override { return false; }
  std::string kind() const override { return "stripe"; }
  nlohmann::json to_json() const override;
  const std::vector<double>& thresholds() const { return thresholds_; }

 private:
  int n_;
  int intervals_;
  std::vector<double> thresholds_;
};

/// Union of radial shells: boundaries 0 = t_0 < ... < t_M, shell i is
/// (t_{i-1}, t_i] (radius exactly t_i belongs to shell i), membership is
/// the per-shell inclusion bit; everything beyond t_M is outside.
class ShellUnionSet final : public TargetSet {
 public:
  ShellUnionSet(int n, std::vector<double> boundaries,
                std::vector<char> included);
  bool contains(const Vec& x) const override;
  int dim() const override { return n_; }
  bool is_convex() const override { return false; }
  std::string kind() const override { return "shell_union"; }
  nlohmann::json to_json() const override;
  const std::vector<double>& boundaries() const { return boundaries_; }
  const std::vector<char>& included() const { return included_; }

 private:
  int n_;
  std::vector<double> boundaries_;
  std::vector<char> included_;
};

/// Convex hull of a finite corner set (the cover-element kind). Membership
/// is decided by LP feasibility, with an exact interval fast path in one
/// dimension and a bounding-box prefilter otherwise.
class CubeHullSet final : public TargetSet {
 public:
  CubeHullSet() : CubeHullSet(Mat(1, 0)) {}
  explicit CubeHullSet(Mat corners);
  bool contains(const Vec& x) const override;
  int dim() const override { return static_cast<int>(corners_.rows()); }
  bool is_convex() const override { return true; }
  std::string kind() const override { return "cube_hull"; }
  nlohmann::json to_json() const override;
  std::int64_t count_disagreements(
      const Mat& points, const std::vector<char>& labels) const override;
  const Mat& corners() const { return corners_; }
  bool empty() const { return corners_.cols() == 0; }

 private:
  Mat corners_;
  Vec bbox_lo_, bbox_hi_;
};

/// Function-backed oracle for tests and experiments; not serializable.
class CustomSet final : public TargetSet {
 public:
  CustomSet(int n, bool convex, std::function<bool(const Vec&)> fn)
      : n_(n), convex_(convex), fn_(std::move(fn)) {}
  bool contains(const Vec& x) const override { return fn_(x); }
  int dim() const override { return n_; }
  bool is_convex() const override { return convex_; }
  std::string kind() const override { return "custom"; }

 private:
  int n_;
  bool convex_;
  std::function<bool(const Vec&)> fn_;
};

/// Reconstructs a TargetSet from its JSON description {kind, params...}.
/// Oracles rebuilt from equal JSON are bit-identical.
TargetPtr target_from_json(const nlohmann::json& spec);

}  // namespace ctb
