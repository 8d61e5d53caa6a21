#include "ctb/tester_two_sided.hpp"

#include <cmath>

#include "ctb/convex.hpp"
#include "ctb/rng.hpp"

namespace ctb {

namespace {

std::int64_t default_learn_samples(std::int64_t candidates, double epsilon,
                                   double delta) {
  const double m =
      (std::log(static_cast<double>(std::max<std::int64_t>(candidates, 2))) +
       std::log(4.0 / delta)) *
      8.0 / epsilon;
  return static_cast<std::int64_t>(std::ceil(m));
}

std::int64_t default_estimate_samples(std::int64_t candidates, double epsilon,
                                      double delta) {
  const double m =
      std::log(4.0 * static_cast<double>(std::max<std::int64_t>(candidates, 2)) /
               delta) *
      50.0 / (epsilon * epsilon);
  return static_cast<std::int64_t>(std::ceil(m));
}

}  // namespace

LearnResult proper_learn_via_cover(const TargetSet& target,
                                   const LearnConfig& config,
                                   const GridParams& grid_params) {
  if (!(config.epsilon > 0.0 && config.epsilon < 1.0) ||
      !(config.delta > 0.0 && config.delta < 1.0)) {
    throw ValidationError("learn: epsilon and delta must lie in (0,1)");
  }
  const Grid grid = Grid::build(grid_params);
  std::vector<CubeHullSet> cover =
      generate_cover(grid, config.cover_subset_cap, config.cover_mode);
  const auto candidates = static_cast<std::int64_t>(cover.size());

  const std::int64_t m =
      config.learn_samples > 0
          ? config.learn_samples
          : default_learn_samples(candidates, config.epsilon, config.delta);
  RngStream stream(config.seed);
  const int n = grid_params.n;

  Mat points(n, m);
  std::vector<char> labels(static_cast<std::size_t>(m));
  for (std::int64_t i = 0; i < m; ++i) {
    points.col(i) = stream.next_gaussian_vec(n);
    labels[static_cast<std::size_t>(i)] =
        target.contains(points.col(i)) ? 1 : 0;
  }

  LearnResult result;
  result.candidates_scored = candidates;
  result.samples_used = m;

  if (!config.two_stage) {
    // Direct ERM: one pooled batch scored against every candidate.
    std::int64_t best_bad = m + 1;
    std::size_t best_idx = 0;
    for (std::size_t c = 0; c < cover.size(); ++c) {
      const std::int64_t bad = cover[c].count_disagreements(points, labels);
      if (bad < best_bad) {
        best_bad = bad;
        best_idx = c;
      }
    }
    result.empirical_error =
        static_cast<double>(best_bad) / static_cast<double>(m);
    result.hypothesis = std::move(cover[best_idx]);
    return result;
  }

  // Two-stage: improper stage-one hypothesis = hull of the positive
  // samples; stage two refits to the nearest cover element by sampled
  // distance (no labeled samples needed for stage two).
  std::int64_t n_pos = 0;
  for (const char l : labels) n_pos += l;
  Mat positives(n, n_pos);
  Index col = 0;
  for (std::int64_t i = 0; i < m; ++i) {
    if (labels[static_cast<std::size_t>(i)]) positives.col(col++) = points.col(i);
  }
  const CubeHullSet stage_one(std::move(positives));

  const std::int64_t est = config.estimate_samples > 0
                               ? config.estimate_samples
                               : default_estimate_samples(
                                     candidates, config.epsilon, config.delta);
  double best_dist = 2.0;
  std::size_t best_idx = 0;
  for (std::size_t c = 0; c < cover.size(); ++c) {
    const McEstimate d =
        estimate_distance(n, stage_one, cover[c], est,
                          split_seed(config.seed, 1 + static_cast<std::uint64_t>(c)));
    if (d.estimate < best_dist) {
      best_dist = d.estimate;
      best_idx = c;
    }
  }
  result.empirical_error = best_dist;
  result.hypothesis = std::move(cover[best_idx]);
  return result;
}

TwoSidedVerdict ggr_test(const TargetSet& target, const LearnConfig& config,
                         const GridParams& grid_params) {
  LearnConfig learn_cfg = config;
  learn_cfg.epsilon = config.epsilon / 2.0;
  learn_cfg.delta = config.delta / 2.0;
  learn_cfg.seed = split_seed(config.seed, 0);

  TwoSidedVerdict verdict;
  verdict.learn = proper_learn_via_cover(target, learn_cfg, grid_params);
  verdict.accept_threshold = 0.75 * config.epsilon;
  verdict.check_samples = static_cast<std::int64_t>(
      std::ceil(8.0 * std::log(2.0 / config.delta) / config.epsilon));

  RngStream stream(split_seed(config.seed, 1));
  const int n = grid_params.n;
  std::int64_t bad = 0;
  for (std::int64_t i = 0; i < verdict.check_samples; ++i) {
    const Vec x = stream.next_gaussian_vec(n);
    if (target.contains(x) != verdict.learn.hypothesis.contains(x)) ++bad;
  }
  verdict.disagreement =
      static_cast<double>(bad) / static_cast<double>(verdict.check_samples);
  verdict.reject = verdict.disagreement > verdict.accept_threshold;
  return verdict;
}

}  // namespace ctb
