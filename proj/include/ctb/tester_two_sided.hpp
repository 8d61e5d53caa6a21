#pragma once

#include <cstdint>

#include "ctb/grid.hpp"
#include "ctb/target_set.hpp"

namespace ctb {

/// Learner configuration. Budgets of 0 select the defaults: learn_samples
/// from the realizable ERM bound over the cover size, estimate_samples
/// (two-stage mode) Hoeffding-sized so each per-candidate distance estimate
/// is within epsilon/5 with overall probability 1 - delta/2.
struct LearnConfig {
  double epsilon = 0.1;
  double delta = 0.1;
  std::int64_t learn_samples = 0;
  std::int64_t cover_subset_cap = std::int64_t{1} << 20;
  std::int64_t estimate_samples = 0;
  bool two_stage = false;
  CoverMode cover_mode = CoverMode::kFull;
  std::uint64_t seed = 0;
};

struct LearnResult {
  CubeHullSet hypothesis;  // always a hull: proper by construction
  double empirical_error = 0.0;
  std::int64_t candidates_scored = 0;
  std::int64_t samples_used = 0;
};

/// Proper learning by ERM over the finite cover: score every cover element
/// against one pooled batch of labeled samples and return the minimizer.
/// The two-stage variant first forms the hull of the positive samples, then
/// returns the cover element nearest to that hull by sampled distance.
LearnResult proper_learn_via_cover(const TargetSet& target,
                                   const LearnConfig& config,
                                   const GridParams& grid_params);

struct TwoSidedVerdict {
  bool reject = false;
  double disagreement = 0.0;
  double accept_threshold = 0.0;  // 3 epsilon / 4
  std::int64_t check_samples = 0;
  LearnResult learn;
};

/// The learn-then-test reduction: learn to accuracy epsilon/2 with
/// confidence 1 - delta/2, then accept iff the empirical disagreement of
/// ceil(8 ln(2/delta) / epsilon) fresh labeled samples with the hypothesis
/// is at most 3 epsilon / 4.
TwoSidedVerdict ggr_test(const TargetSet& target, const LearnConfig& config,
                         const GridParams& grid_params);

}  // namespace ctb
