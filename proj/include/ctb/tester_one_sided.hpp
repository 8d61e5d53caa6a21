#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "ctb/grid.hpp"
#include "ctb/target_set.hpp"
#include "ctb/types.hpp"

namespace ctb {

/// Configuration of one run of the one-sided tester. sample_budget = 0
/// selects the coupon-collector default ceil((ln(#cubes) + 3) / min cube
/// mass); reject_threshold < 0 selects the epsilon/4 default.
struct OneSidedConfig {
  GridParams grid;
  std::int64_t sample_budget = 0;
  int runs = 1;
  double reject_threshold = -1.0;
  std::uint64_t seed = 0;
};

/// Label truncation of the reduction to Ball(n'): labels of points outside
/// the ball are forced to 0.
LabeledSample truncate_labels(LabeledSample sample, double n_prime);

/// Evidence that one grid cube is a boundary cube: a positive point inside
/// it and a negative point in a Chebyshev-adjacent cube.
struct BoundaryCubeEvidence {
  CubeIndex cube;
  Vec positive_witness;
  CubeIndex negative_cube;
  Vec negative_witness;
};

/// A machine-checkable rejection certificate. Either the boundary cubes
/// carry too much exact Gaussian mass, or a fresh point lies in the hull of
/// the positive samples yet is labeled negative. Both re-verify against the
/// oracle and the LP membership test; neither can exist for a convex target.
struct RejectionCertificate {
  enum class Kind { kBcMassExcess, kHullViolation };
  Kind kind = Kind::kBcMassExcess;

  // kBcMassExcess
  std::vector<BoundaryCubeEvidence> boundary_cubes;
  double bc_mass = 0.0;
  double threshold = 0.0;

  // kHullViolation
  Vec witness;
  Mat positive_generators;
};

struct OneSidedVerdict {
  bool reject = false;
  std::optional<RejectionCertificate> certificate;
  bool early_accept_empty_cube = false;
  std::int64_t samples_used = 0;
  double bc_mass = 0.0;
  double reject_threshold = 0.0;
  int rejecting_run = -1;  // set by the amplifier
};

/// One run of the five-step algorithm: draw truncated samples, accept early
/// if any cube is empty, reject on boundary-cube mass at least the
/// threshold, otherwise probe one fresh point against the hull of the
/// positive samples.
OneSidedVerdict run_a_star(const TargetSet& target, const OneSidedConfig& config);

/// OR of `runs` independent runs; the certificate of the first rejecting
/// run is returned. One-sidedness is preserved: no run can reject a convex
/// target.
OneSidedVerdict run_a_prime(const TargetSet& target, const OneSidedConfig& config);

/// Independently re-verifies a rejection certificate against the oracle:
/// re-sums the exact masses of the evidenced boundary cubes, re-checks each
/// witness pair, or re-runs the LP membership test on the hull witness.
bool verify_certificate(const OneSidedVerdict& verdict, const TargetSet& target,
                        const OneSidedConfig& config);

/// Recreates the labeled sample set of one run (exactly as run_a_star draws
/// it for config.seed) and classifies it; feeds the CSV diagnostics export.
CubeClassification classify_a_star_samples(const TargetSet& target,
                                           const OneSidedConfig& config,
                                           const Grid& grid);

}  // namespace ctb
