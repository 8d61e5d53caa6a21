#pragma once

#include <cstdint>
#include <string>

#include "ctb/rng.hpp"
#include "ctb/target_set.hpp"
#include "ctb/types.hpp"

namespace ctb {

/// A Monte Carlo frequency with its binomial standard error.
struct McEstimate {
  double estimate = 0.0;
  double std_error = 0.0;
  std::int64_t samples = 0;
};

/// Gaussian volume of the symmetric difference of two oracles, estimated
/// over `samples` standard-normal draws. Symmetric in (a, b) for a fixed
/// seed by construction.
McEstimate estimate_distance(int n, const TargetSet& a, const TargetSet& b,
                             std::int64_t samples, std::uint64_t seed);

/// Gaussian volume of any oracle.
McEstimate estimate_volume(int n, const TargetSet& a, std::int64_t samples,
                           std::uint64_t seed);

/// The thickened-boundary volume bound 20 n^{5/8} K sqrt(alpha).
double thickened_boundary_bound(int n, double k_bound, double alpha);

struct BoundaryVolumeEstimate {
  double estimate = 0.0;
  double std_error = 0.0;
  std::int64_t samples_used = 0;
  double alpha = 0.0;
  double k_bound = 0.0;
};

/// Monte Carlo estimate of Vol(boundary(C) + Ball(alpha)) for a convex
/// oracle with analytic dilation/erosion tests. Requires 0 < alpha < n^{-3/4}.
BoundaryVolumeEstimate estimate_thickened_boundary_volume(
    int n, const TargetSet& c, double alpha, double k_bound,
    std::int64_t samples, std::uint64_t seed);

struct BallTheoremReport {
  double vol_estimate = 0.0;   // Vol(C_h \ C)
  double std_error = 0.0;
  double ratio = 0.0;          // vol_estimate / h
  double bound = 0.0;          // 4 n^{1/4}
  double h = 0.0;
  bool passed = false;         // (estimate - 4 se) / h <= bound
};

/// Checks Vol(C_h \ C) / h <= 4 n^{1/4} by Monte Carlo.
BallTheoremReport check_ball_theorem(int n, const TargetSet& c, double h,
                                     std::int64_t samples, std::uint64_t seed);

/// Which structural inequality to exercise and on what instance family.
struct AppendixLemmaConfig {
  enum class Lemma {
    kNoBallVolume,          // Vol(C + Ball(alpha)) <= 2(n rho + alpha)
    kShrunkenDistance,      // dist((1 - alpha/rho) C, boundary C) >= alpha
    kThickenedContainment,  // boundary C + Ball(alpha) within 2K beta + alpha
  };
  Lemma lemma = Lemma::kNoBallVolume;
  int n = 2;
  double rho = 0.1;
  double alpha = 0.05;
  double beta = 0.1;     // kThickenedContainment only
  double k_bound = 2.0;  // norm bound on the instance
  std::string family = "ball";  // "ball", "box", "polytope" (per lemma)
  std::int64_t samples = 20000;
  std::uint64_t seed = 0;
};

struct AppendixLemmaReport {
  bool passed = false;
  double bound = 0.0;
  double observed = 0.0;  // the quantity compared against the bound
  double margin = 0.0;    // signed slack, >= 0 when passed
  std::string detail;
};

AppendixLemmaReport check_appendix_lemma(const AppendixLemmaConfig& config);

/// Largest multiple of `direction` inside Conv(generators), by bisection on
/// hull membership. Requires the origin to be a member.
double radial_exit(const Mat& generators, const Vec& direction,
                   double upper_hint = 1.0);

}  // namespace ctb
