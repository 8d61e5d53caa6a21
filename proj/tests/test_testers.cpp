#include <doctest.h>

#include <cmath>

#include "ctb/convex.hpp"
#include "ctb/gauss.hpp"
#include "ctb/rng.hpp"
#include "ctb/tester_one_sided.hpp"
#include "ctb/tester_two_sided.hpp"

using namespace ctb;

namespace {

// Desk-scale grid with ell small enough that boundary cubes of a smooth
// convex target stay well under the eps/4 mass threshold.
OneSidedConfig small_config(std::uint64_t seed) {
  OneSidedConfig config;
  config.grid = GridParams::make(2, 0.4, 0.05, 1.0);
  config.seed = seed;
  return config;
}

}  // namespace

TEST_CASE("label truncation rule") {
  Vec x(2);
  x << 1.0, 0.0;
  CHECK(truncate_labels({x, true}, 2.0).label);
  x << 4.0, 0.0;
  CHECK_FALSE(truncate_labels({x, true}, 2.0).label);
  CHECK_FALSE(truncate_labels({x, false}, 2.0).label);
  // Ball(n') carries nearly all the mass when n' is set from epsilon.
  const GridParams p = GridParams::make(2, 0.2, 0.5, std::nullopt);
  const double ball_mass = gaussian_mass_of_radial_band(2, 0.0, p.n_prime);
  CHECK(ball_mass >= 1.0 - 0.2 / 4.0);
}

TEST_CASE("full-space target: no negatives, always accept") {
  const FullSpaceSet target;
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const OneSidedVerdict v = run_a_star(target, small_config(seed));
    CHECK_FALSE(v.reject);
  }
}

TEST_CASE("convex targets are never rejected") {
  const BallSet ball(2, 0.5);
  // three halfspaces forming a triangle around the origin
  Mat normals(2, 3);
  normals << 1, -1, 0, 1, 1, -1;
  Vec off(3);
  off << 1.2, 1.3, 1.25;
  const HalfspaceIntersectionSet wedge(normals, off);
  for (std::uint64_t seed = 0; seed < 6; ++seed) {
    CHECK_FALSE(run_a_star(ball, small_config(seed)).reject);
    CHECK_FALSE(run_a_star(wedge, small_config(100 + seed)).reject);
  }
}

TEST_CASE("starved sample budget triggers the early accept") {
  const BallSet ball(2, 0.5);
  OneSidedConfig config = small_config(7);
  config.sample_budget = 3;  // cannot occupy every cube
  const OneSidedVerdict v = run_a_star(ball, config);
  CHECK_FALSE(v.reject);
  CHECK(v.early_accept_empty_cube);
}

TEST_CASE("stripe target is rejected with a verifiable certificate") {
  const StripeSet stripe(2, 5);
  OneSidedConfig config = small_config(1);
  config.runs = 4;
  const OneSidedVerdict v = run_a_prime(stripe, config);
  REQUIRE(v.reject);
  REQUIRE(v.certificate.has_value());
  CHECK(verify_certificate(v, stripe, config));
  CHECK(v.rejecting_run >= 0);
}

TEST_CASE("bc-mass certificates re-verify and fail against the wrong oracle") {
  const StripeSet stripe(2, 5);
  OneSidedConfig config = small_config(3);
  config.runs = 4;
  const OneSidedVerdict v = run_a_prime(stripe, config);
  REQUIRE(v.reject);
  CHECK(verify_certificate(v, stripe, config));
  // The same evidence cannot verify against a different target whose labels
  // contradict the witnesses.
  const FullSpaceSet everything;
  CHECK_FALSE(verify_certificate(v, everything, config));
}

TEST_CASE("verdicts are deterministic given the seed") {
  const StripeSet stripe(2, 5);
  OneSidedConfig config = small_config(42);
  config.runs = 4;
  const OneSidedVerdict a = run_a_prime(stripe, config);
  const OneSidedVerdict b = run_a_prime(stripe, config);
  CHECK(a.reject == b.reject);
  CHECK(a.bc_mass == b.bc_mass);
  CHECK(a.rejecting_run == b.rejecting_run);
  CHECK(a.samples_used == b.samples_used);
}

TEST_CASE("hull-violation certificates arise and verify on a sparse stripe") {
  // With the boundary-mass threshold forced high, step 3 cannot fire and a
  // non-convex target must eventually be caught by the step-5 hull probe.
  const StripeSet stripe(2, 5);
  OneSidedConfig config = small_config(11);
  config.reject_threshold = 0.99;
  config.runs = 24;
  const OneSidedVerdict v = run_a_prime(stripe, config);
  REQUIRE(v.reject);
  REQUIRE(v.certificate.has_value());
  CHECK(v.certificate->kind == RejectionCertificate::Kind::kHullViolation);
  CHECK(verify_certificate(v, stripe, config));
}

// ---------------------------------------------------------------------------
// Two-sided tester
// ---------------------------------------------------------------------------

namespace {

GridParams learn_grid() { return GridParams::make(1, 0.2, 0.5, 1.0); }

}  // namespace

TEST_CASE("empty target learns the empty hypothesis") {
  const EmptySet target;
  LearnConfig config;
  config.epsilon = 0.2;
  config.delta = 0.2;
  config.seed = 5;
  const LearnResult r = proper_learn_via_cover(target, config, learn_grid());
  CHECK(r.hypothesis.empty());
  CHECK(r.empirical_error == 0.0);
  CHECK(r.candidates_scored > 0);
}

TEST_CASE("realizable cover element is learned to small error") {
  // Target = hull of cubes -1..1 of the 9-cube grid: [-0.75, 0.75].
  Mat corners(1, 2);
  corners << -0.75, 0.75;
  const CubeHullSet target(corners);
  LearnConfig config;
  config.epsilon = 0.1;
  config.delta = 0.1;
  config.seed = 17;
  const LearnResult r = proper_learn_via_cover(target, config, learn_grid());
  const McEstimate d = estimate_distance(1, r.hypothesis, target, 20000, 23);
  CHECK(d.estimate <= 0.1);
}

TEST_CASE("ERM dominance: returned error is the minimum over candidates") {
  Mat corners(1, 2);
  corners << -0.25, 0.75;
  const CubeHullSet target(corners);
  LearnConfig config;
  config.epsilon = 0.2;
  config.delta = 0.2;
  config.learn_samples = 400;
  config.seed = 31;
  const GridParams gp = learn_grid();
  const LearnResult r = proper_learn_via_cover(target, config, gp);

  // Rescore every candidate on the same batch: nothing beats the result.
  const Grid grid = Grid::build(gp);
  const auto cover = generate_cover(grid, config.cover_subset_cap);
  RngStream stream(config.seed);
  Mat points(1, config.learn_samples);
  std::vector<char> labels(static_cast<std::size_t>(config.learn_samples));
  for (std::int64_t i = 0; i < config.learn_samples; ++i) {
    points.col(i) = stream.next_gaussian_vec(1);
    labels[static_cast<std::size_t>(i)] = target.contains(points.col(i)) ? 1 : 0;
  }
  const auto best = static_cast<std::int64_t>(
      std::llround(r.empirical_error * static_cast<double>(config.learn_samples)));
  for (const auto& candidate : cover) {
    CHECK(candidate.count_disagreements(points, labels) >= best);
  }
}

TEST_CASE("two-stage learning returns a cover element near the target") {
  Mat corners(1, 2);
  corners << -0.75, 0.25;
  const CubeHullSet target(corners);
  LearnConfig config;
  config.epsilon = 0.2;
  config.delta = 0.2;
  config.two_stage = true;
  config.learn_samples = 500;
  config.estimate_samples = 2000;
  config.seed = 71;
  const LearnResult r = proper_learn_via_cover(target, config, learn_grid());
  const McEstimate d = estimate_distance(1, r.hypothesis, target, 20000, 23);
  CHECK(d.estimate <= 0.15);
}

TEST_CASE("hypothesis properness: segment membership witness") {
  const StripeSet stripe(1, 5);
  LearnConfig config;
  config.epsilon = 0.2;
  config.delta = 0.2;
  config.seed = 3;
  const LearnResult r = proper_learn_via_cover(stripe, config, learn_grid());
  RngStream stream(99);
  int segments = 0;
  while (segments < 10) {
    Vec a(1), b(1);
    a << 3.0 * (stream.next_double() - 0.5);
    b << 3.0 * (stream.next_double() - 0.5);
    if (!r.hypothesis.contains(a) || !r.hypothesis.contains(b)) continue;
    ++segments;
    for (int k = 1; k < 100; ++k) {
      const double t = k / 100.0;
      CHECK(r.hypothesis.contains(Vec(a + t * (b - a))));
    }
  }
}

TEST_CASE("learn-then-test accepts a cover element and rejects the stripe") {
  Mat corners(1, 2);
  corners << -0.75, 0.75;
  const CubeHullSet element(corners);
  const StripeSet stripe(1, 5);
  int accepts = 0;
  int rejects = 0;
  for (std::uint64_t seed = 0; seed < 9; ++seed) {
    LearnConfig config;
    config.epsilon = 0.2;
    config.delta = 0.2;
    config.seed = seed;
    if (!ggr_test(element, config, learn_grid()).reject) ++accepts;
    if (ggr_test(stripe, config, learn_grid()).reject) ++rejects;
  }
  CHECK(accepts >= 6);  // at least 2/3
  CHECK(rejects >= 6);
}

TEST_CASE("acceptance flips monotonically in the measured disagreement") {
  Mat corners(1, 2);
  corners << -0.75, 0.75;
  const CubeHullSet element(corners);
  LearnConfig config;
  config.epsilon = 0.2;
  config.delta = 0.2;
  config.seed = 8;
  const TwoSidedVerdict v = ggr_test(element, config, learn_grid());
  CHECK(v.reject == (v.disagreement > v.accept_threshold));
}

TEST_CASE("chaining: the refit cover element stays within 4 eps / 5 of H") {
  // Premises arranged by construction: the target is itself a cover
  // element (dist(S, C') = 0) and the stage-one hull is dense enough that
  // dist(H, S) <= eps/5. The selected element must then be 4 eps / 5 close
  // to H in true distance.
  const double eps = 0.25;
  const GridParams gp = learn_grid();
  const Grid grid = Grid::build(gp);
  const auto cover = generate_cover(grid);
  Mat target_corners(1, 2);
  target_corners << -0.75, 0.75;
  const CubeHullSet target(target_corners);

  RngStream stream(22);
  const int m = 4000;
  std::int64_t n_pos = 0;
  Mat points(1, m);
  for (int i = 0; i < m; ++i) {
    points.col(i) = stream.next_gaussian_vec(1);
    if (target.contains(points.col(i))) ++n_pos;
  }
  Mat positives(1, n_pos);
  Index col = 0;
  for (int i = 0; i < m; ++i) {
    if (target.contains(points.col(i))) positives.col(col++) = points.col(i);
  }
  const CubeHullSet stage_one(positives);
  const McEstimate h_to_s = estimate_distance(1, stage_one, target, 40000, 23);
  REQUIRE(h_to_s.estimate <= eps / 5.0);  // premise holds by construction

  // Select the nearest cover element to H by sampled distance.
  double best = 2.0;
  std::size_t best_idx = 0;
  for (std::size_t c = 0; c < cover.size(); ++c) {
    const McEstimate d = estimate_distance(
        1, stage_one, cover[c], 3000, split_seed(24, static_cast<std::uint64_t>(c)));
    if (d.estimate < best) {
      best = d.estimate;
      best_idx = c;
    }
  }
  const McEstimate refit =
      estimate_distance(1, stage_one, cover[best_idx], 40000, 25);
  CHECK(refit.estimate <= 4.0 * eps / 5.0);
}

TEST_CASE("acceptance frequency does not degrade as delta shrinks") {
  Mat corners(1, 2);
  corners << -0.75, 0.75;
  const CubeHullSet element(corners);
  std::int64_t prev_checks = 0;
  int prev_accepts = -1;
  for (const double delta : {0.4, 0.1, 0.02}) {
    int accepts = 0;
    std::int64_t checks = 0;
    for (std::uint64_t seed = 0; seed < 8; ++seed) {
      LearnConfig config;
      config.epsilon = 0.2;
      config.delta = delta;
      config.seed = 1000 + seed;
      const TwoSidedVerdict v = ggr_test(element, config, learn_grid());
      checks = v.check_samples;
      if (!v.reject) ++accepts;
    }
    CHECK(checks > prev_checks);  // budget grows as delta shrinks
    if (prev_accepts >= 0) {
      CHECK(accepts >= prev_accepts - 2);  // 4-sigma-ish slack on 8 trials
    }
    prev_checks = checks;
    prev_accepts = accepts;
  }
}
