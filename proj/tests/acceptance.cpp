// Acceptance suite: one numbered check per release criterion, each printed
// as a single pass/fail line. Every check is a deterministic function of
// its hard-coded seeds and returns its headline metrics; the final check
// re-runs everything and requires bitwise-identical metrics.

#include <chrono>
#include <cmath>
#include <cstring>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "ctb/adversarial.hpp"
#include "ctb/convex.hpp"
#include "ctb/gauss.hpp"
#include "ctb/grid.hpp"
#include "ctb/lp.hpp"
#include "ctb/rng.hpp"
#include "ctb/special.hpp"
#include "ctb/target_set.hpp"
#include "ctb/tester_one_sided.hpp"
#include "ctb/tester_two_sided.hpp"

using namespace ctb;

namespace {

struct Outcome {
  bool passed = false;
  std::string detail;
  std::vector<double> metrics;
};

using CriterionFn = std::function<Outcome()>;

std::string fmt(double v) {
  std::ostringstream ss;
  ss.precision(6);
  ss << v;
  return ss.str();
}

// ---- 1: cap exactness --------------------------------------------------

Outcome cap_exactness() {
  Outcome out;
  double max_err_n3 = 0.0;
  const CapTable t3(3);
  for (int i = 0; i <= 100; ++i) {
    const double t = i / 100.0;
    max_err_n3 = std::max(max_err_n3, std::abs(t3.cap(t) - (1.0 - t) / 2.0));
  }
  double max_err_ends = 0.0;
  for (int n = 3; n <= 50; ++n) {
    const CapTable table(n);
    max_err_ends = std::max(max_err_ends, std::abs(table.cap(0.0) - 0.5));
    max_err_ends = std::max(max_err_ends, std::abs(table.cap(1.0)));
  }
  out.passed = max_err_n3 <= 1e-9 && max_err_ends <= 1e-9;
  out.detail = "max |cap - (1-t)/2| = " + fmt(max_err_n3) +
               ", max endpoint error = " + fmt(max_err_ends);
  out.metrics = {max_err_n3, max_err_ends};
  return out;
}

// ---- 2: cap upper bound ------------------------------------------------

Outcome cap_bound() {
  Outcome out;
  double worst_slack = 1.0;  // min of bound - cap over the grid
  for (int n = 3; n <= 50; ++n) {
    const CapTable table(n);
    for (int i = 0; i <= 20; ++i) {
      const double t = i / 20.0;
      const double slack = std::exp(-0.5 * n * t * t) - table.cap(t);
      worst_slack = std::min(worst_slack, slack);
    }
  }
  out.passed = worst_slack >= -1e-9;
  out.detail = "min (e^{-nt^2/2} - cap) = " + fmt(worst_slack);
  out.metrics = {worst_slack};
  return out;
}

// ---- 3: chi-squared tail -----------------------------------------------

Outcome chi2_tail() {
  Outcome out;
  out.passed = true;
  const std::vector<double> ts{0.1, 0.25, 0.4};
  for (const int n : {8, 16, 32}) {
    RngStream stream(0xC3 + static_cast<std::uint64_t>(n));
    const std::int64_t m = 1000000;
    std::vector<std::int64_t> hits(ts.size(), 0);
    for (std::int64_t i = 0; i < m; ++i) {
      double sq = 0.0;
      for (int d = 0; d < n; ++d) {
        const double g = stream.next_gaussian();
        sq += g * g;
      }
      for (std::size_t k = 0; k < ts.size(); ++k) {
        if (std::abs(sq - n) >= ts[k] * n) ++hits[k];
      }
    }
    for (std::size_t k = 0; k < ts.size(); ++k) {
      const double freq = static_cast<double>(hits[k]) / m;
      const double bound = chi2_tail_bound(n, ts[k]);
      out.metrics.push_back(freq);
      if (freq > bound) {
        out.passed = false;
        out.detail += " n=" + std::to_string(n) + ",t=" + fmt(ts[k]) +
                      ": freq " + fmt(freq) + " > bound " + fmt(bound) + ";";
      }
    }
  }
  if (out.passed) out.detail = "all 9 MC frequencies below the tail bound";
  return out;
}

// ---- 4: shell partition ------------------------------------------------

Outcome shell_partition() {
  Outcome out;
  out.passed = true;
  for (const auto& [n, m] : std::vector<std::pair<int, int>>{{4, 64}, {16, 256}}) {
    const auto bounds = build_shells(n, m);
    const double outer = 2.0 * std::sqrt(static_cast<double>(n));
    if (bounds.back() != outer) {
      out.passed = false;
      out.detail += " t_M != 2 sqrt(n) exactly;";
    }
    const double total = gaussian_mass_of_radial_band(n, 0.0, outer);
    const double target = total / m;
    double max_rel = 0.0;
    for (int i = 0; i < m; ++i) {
      const double mass = gaussian_mass_of_radial_band(
          n, bounds[static_cast<std::size_t>(i)],
          bounds[static_cast<std::size_t>(i) + 1]);
      max_rel = std::max(max_rel, std::abs(mass - target) / target);
    }
    out.metrics.push_back(max_rel);
    if (max_rel > 1e-6) {
      out.passed = false;
      out.detail += " n=" + std::to_string(n) + ": max rel dev " + fmt(max_rel) + ";";
    }
  }
  if (out.passed) {
    out.detail = "max relative deviations " + fmt(out.metrics[0]) + " (n=4,M=64), " +
                 fmt(out.metrics[1]) + " (n=16,M=256); t_M exact";
  }
  return out;
}

// ---- 5: marginal identity ----------------------------------------------

Outcome marginal_identity() {
  Outcome out;
  out.passed = true;
  const int n = 8;
  const CapTable table(n);
  const LowerBoundParams lbp = derive_lower_bound_params(n, table, 16);
  const std::int64_t trials = 10000;
  const double lo = 0.5 * lbp.r;
  const double hi = 2.0 * lbp.alpha;
  for (int k = 0; k < 5; ++k) {
    const double radius = lo + (hi - lo) * k / 4.0;
    const double p = rho(radius, lbp.r, lbp.halfspace_count, table);
    Vec z = Vec::Zero(n);
    z[0] = radius;
    std::int64_t hits = 0;
    for (std::int64_t t = 0; t < trials; ++t) {
      const RandomPolytopeSet s = sample_dyes(
          n, lbp.halfspace_count, lbp.r,
          split_seed(0x5E11, static_cast<std::uint64_t>(k * trials + t)));
      if (s.contains(z)) ++hits;
    }
    const double freq = static_cast<double>(hits) / trials;
    const double se = std::sqrt(p * (1.0 - p) / trials);
    out.metrics.push_back(freq);
    out.metrics.push_back(p);
    if (std::abs(freq - p) > 4.0 * se) {
      out.passed = false;
      out.detail += " radius " + fmt(radius) + ": freq " + fmt(freq) +
                    " vs rho " + fmt(p) + " (4se " + fmt(4.0 * se) + ");";
    }
  }
  if (out.passed) out.detail = "5 radii match rho within 4 binomial sigma";
  return out;
}

// ---- 6: rho anchor -----------------------------------------------------

Outcome rho_anchor() {
  Outcome out;
  double worst = 0.0;
  for (const int n : {8, 16}) {
    const CapTable table(n);
    const LowerBoundParams lbp = derive_lower_bound_params(n, table, 16);
    const double expected =
        std::pow(1.0 - 1.0 / static_cast<double>(lbp.halfspace_count),
                 static_cast<double>(lbp.halfspace_count));
    const double got = rho(lbp.alpha, lbp.r, lbp.halfspace_count, table);
    worst = std::max(worst, std::abs(got - expected));
    out.metrics.push_back(got);
  }
  out.passed = worst <= 1e-9;
  out.detail = "max |rho(alpha) - (1-1/N)^N| = " + fmt(worst);
  return out;
}

// ---- 7: hull oracle equivalence ----------------------------------------

Outcome hull_oracle_equivalence() {
  Outcome out;
  RngStream stream(0xCA7A);
  std::int64_t agree = 0;
  const int total = 1000;
  for (int trial = 0; trial < total; ++trial) {
    const int n = 1 + static_cast<int>(stream.next_below(3));
    const int m = 1 + static_cast<int>(stream.next_below(8));
    Mat g(n, m);
    for (Index j = 0; j < m; ++j) g.col(j) = stream.next_gaussian_vec(n);
    const Vec query = stream.next_gaussian_vec(n);
    if (conv_membership(query, g) == hull_membership_caratheodory(query, g)) {
      ++agree;
    }
  }
  out.passed = agree == total;
  out.detail = std::to_string(agree) + "/1000 verdicts agree with brute force";
  out.metrics = {static_cast<double>(agree)};
  return out;
}

// ---- 8: Ball's theorem -------------------------------------------------

Outcome ball_theorem() {
  Outcome out;
  out.passed = true;
  const double h = 0.01;
  const std::int64_t samples = 200000;
  for (const int n : {2, 4, 8}) {
    Mat normal = Mat::Zero(n, 1);
    normal(0, 0) = 1.0;
    const HalfspaceIntersectionSet half(normal, Vec::Zero(1));
    const BallTheoremReport hrep = check_ball_theorem(
        n, half, h, samples, 0xBA11 + static_cast<std::uint64_t>(n));
    out.metrics.push_back(hrep.ratio);
    if (!hrep.passed) {
      out.passed = false;
      out.detail += " halfspace n=" + std::to_string(n) + " ratio too big;";
    }
    // 1-D closed form: Vol(C_h \ C) = Phi(h) - Phi(0).
    const double exact = normal_cdf(h) - 0.5;
    if (std::abs(hrep.vol_estimate - exact) > 4.0 * hrep.std_error + 1e-12) {
      out.passed = false;
      out.detail += " halfspace n=" + std::to_string(n) + " off closed form;";
    }
    const BallSet ball(n, std::sqrt(static_cast<double>(n)));
    const BallTheoremReport brep = check_ball_theorem(
        n, ball, h, samples, 0xB0B + static_cast<std::uint64_t>(n));
    out.metrics.push_back(brep.ratio);
    if (!brep.passed) {
      out.passed = false;
      out.detail += " ball n=" + std::to_string(n) + " ratio too big;";
    }
  }
  if (out.passed) out.detail = "6 targets satisfy (est - 4se)/h <= 4 n^{1/4}";
  return out;
}

// ---- 9: thickened-boundary bound ---------------------------------------

Outcome thickened_boundary() {
  Outcome out;
  out.passed = true;
  const std::int64_t samples = 50000;
  for (const int n : {2, 4}) {
    const CapTable table(n);
    const LowerBoundParams lbp = derive_lower_bound_params(n, table);
    const double alpha = 0.1 * std::pow(static_cast<double>(n), -0.75);
    const double k_bound = 2.0 * std::sqrt(static_cast<double>(n));
    const double bound = thickened_boundary_bound(n, k_bound, alpha);
    double max_est = 0.0;
    for (int p = 0; p < 20; ++p) {
      const RandomPolytopeSet polytope =
          sample_dyes(n, lbp.halfspace_count, lbp.r,
                      split_seed(0x3B1, static_cast<std::uint64_t>(100 * n + p)));
      const BoundaryVolumeEstimate est = estimate_thickened_boundary_volume(
          n, polytope, alpha, k_bound, samples,
          split_seed(0x3B2, static_cast<std::uint64_t>(100 * n + p)));
      max_est = std::max(max_est, est.estimate);
      if (est.estimate - 4.0 * est.std_error > bound) {
        out.passed = false;
        out.detail += " n=" + std::to_string(n) + " polytope " +
                      std::to_string(p) + " exceeds the bound;";
      }
    }
    out.metrics.push_back(max_est);
    out.metrics.push_back(bound);
  }
  if (out.passed) {
    out.detail = "40 polytopes under the bound (max estimates " +
                 fmt(out.metrics[0]) + " vs bound " + fmt(out.metrics[1]) +
                 " at n=2, " + fmt(out.metrics[2]) + " vs " +
                 fmt(out.metrics[3]) + " at n=4)";
  }
  return out;
}

// ---- 10: one-sided soundness as certificates ---------------------------

OneSidedConfig soundness_config(std::uint64_t seed) {
  OneSidedConfig config;
  config.grid = GridParams::make(2, 0.4, 0.03, 1.0);
  config.runs = 1;
  config.seed = seed;
  return config;
}

Outcome one_sided_soundness() {
  Outcome out;
  const BallSet ball(2, 0.5);
  Mat normals(2, 3);
  normals << 1, -1, 0, 1, 1, -1;
  Vec off(3);
  off << 1.2, 1.3, 1.25;
  const HalfspaceIntersectionSet wedge(normals, off);
  std::int64_t rejections = 0;
  std::int64_t verified_rejections = 0;
  for (int i = 0; i < 100; ++i) {
    for (const TargetSet* target :
         std::initializer_list<const TargetSet*>{&ball, &wedge}) {
      const OneSidedConfig config =
          soundness_config(split_seed(0x10A, static_cast<std::uint64_t>(
                                                 2 * i + (target == &wedge))));
      const OneSidedVerdict v = run_a_prime(*target, config);
      if (v.reject) {
        ++rejections;
        if (verify_certificate(v, *target, config)) ++verified_rejections;
      }
    }
  }
  out.passed = rejections == 0;
  out.detail = std::to_string(rejections) + "/200 rejections (" +
               std::to_string(verified_rejections) + " verified)";
  out.metrics = {static_cast<double>(rejections),
                 static_cast<double>(verified_rejections)};
  return out;
}

// ---- 11: one-sided power on the stripe ---------------------------------

Outcome one_sided_power() {
  // Per-run rejection rate calibrated once at these parameters and pinned:
  // the stripe's boundary cubes carry ~0.066 exact mass against the 0.05
  // threshold, so a run rejects whenever every cube is occupied. Regression
  // floor for the per-run rate: 0.80.
  constexpr double kPinnedPerRunFloor = 0.80;
  Outcome out;
  const StripeSet stripe(2, 5);
  const int trials = 50;
  const double eps = 0.2;
  const int runs = static_cast<int>(std::ceil(0.6 / eps));  // c = 0.6
  std::int64_t rejected = 0;
  std::int64_t verified = 0;
  std::int64_t star_runs = 0;
  std::int64_t star_rejections = 0;
  for (int t = 0; t < trials; ++t) {
    OneSidedConfig config;
    config.grid = GridParams::make(2, eps, 0.03, 1.0);
    config.runs = runs;
    config.seed = split_seed(0x10B, static_cast<std::uint64_t>(t));
    const OneSidedVerdict v = run_a_prime(stripe, config);
    if (v.reject) {
      ++rejected;
      star_runs += v.rejecting_run + 1;
      ++star_rejections;
      if (verify_certificate(v, stripe, config)) ++verified;
    } else {
      star_runs += runs;
    }
  }
  const double overall = static_cast<double>(rejected) / trials;
  const double per_run =
      static_cast<double>(star_rejections) / static_cast<double>(star_runs);
  out.passed = overall >= 2.0 / 3.0 && verified == rejected &&
               per_run >= kPinnedPerRunFloor;
  out.detail = "overall rejection " + fmt(overall) + ", per-run rate " +
               fmt(per_run) + " (floor " + fmt(kPinnedPerRunFloor) + "), " +
               std::to_string(verified) + "/" + std::to_string(rejected) +
               " certificates verified";
  out.metrics = {overall, per_run, static_cast<double>(verified)};
  return out;
}

// ---- 12: two-sided realizable learning ---------------------------------

Outcome two_sided_realizable() {
  Outcome out;
  const GridParams grid_params = GridParams::make(1, 0.1, 0.5, 2.0);
  const Grid grid = Grid::build(grid_params);
  if (grid.cube_count() != 17) {
    out.detail = "grid does not have 17 cubes";
    return out;
  }
  // Target: a cover element, the hull of cubes -3..1.
  Mat corners(1, 2);
  corners << -1.75, 0.75;
  const CubeHullSet target(corners);
  int successes = 0;
  const int trials = 50;
  for (int t = 0; t < trials; ++t) {
    LearnConfig config;
    config.epsilon = 0.1;
    config.delta = 0.1;
    config.seed = split_seed(0x125, static_cast<std::uint64_t>(t));
    const LearnResult r = proper_learn_via_cover(target, config, grid_params);
    const McEstimate d = estimate_distance(
        1, r.hypothesis, target, 20000,
        split_seed(0x126, static_cast<std::uint64_t>(t)));
    if (d.estimate <= 0.1) ++successes;
  }
  out.passed = successes >= 45;  // >= 90% of 50
  out.detail = std::to_string(successes) + "/50 trials within eps = 0.1";
  out.metrics = {static_cast<double>(successes)};
  return out;
}

// ---- 13: internal-cube lemma -------------------------------------------

Outcome internal_cube_lemma() {
  Outcome out;
  std::int64_t contained = 0;
  const int total = 1000;
  for (int t = 0; t < total; ++t) {
    const int n = t < 500 ? 1 : 2;
    const GridParams gp = n == 1 ? GridParams::make(1, 0.3, 0.5, 2.0)
                                 : GridParams::make(2, 0.3, 0.5, 1.5);
    const Grid grid = Grid::build(gp);
    RngStream stream(split_seed(0x13A, static_cast<std::uint64_t>(t)));
    // A random convex target inside Ball(n'), labels through truncation.
    const double radius = 0.3 + 0.5 * stream.next_double();
    Vec center = stream.next_sphere_point(
        n, (gp.n_prime - radius) * 0.8 * stream.next_double());
    const BallSet target(n, radius, center);

    // One uniform point per cube satisfies the occupancy hypothesis; extra
    // Gaussian points add realism.
    std::vector<LabeledSample> samples;
    grid.for_each_cube([&](const CubeIndex& cube) {
      Vec x(n);
      for (int a = 0; a < n; ++a) {
        x[a] = (cube.coords[static_cast<std::size_t>(a)] +
                stream.next_double() - 0.5) *
               gp.ell;
      }
      const bool label = x.norm() <= gp.n_prime && target.contains(x);
      samples.push_back(LabeledSample{std::move(x), label});
    });
    for (int extra = 0; extra < 30; ++extra) {
      Vec x = stream.next_gaussian_vec(n);
      const bool label = x.norm() <= gp.n_prime && target.contains(x);
      samples.push_back(LabeledSample{std::move(x), label});
    }
    if (internal_cube_containment_check(grid, samples).outcome ==
        ContainmentOutcome::kAllContained) {
      ++contained;
    }
  }
  out.passed = contained == total;
  out.detail = std::to_string(contained) + "/1000 sample sets fully contained";
  out.metrics = {static_cast<double>(contained)};
  return out;
}

// ---- 14: shattering trivia and trend -----------------------------------

Outcome shattering_trend() {
  Outcome out;
  out.passed = true;
  const ShatterReport line = shattering_experiment(1, 3, 1000, 0x14A);
  const ShatterReport plane = shattering_experiment(2, 3, 1000, 0x14B);
  out.metrics.push_back(line.shatter_frequency);
  out.metrics.push_back(plane.shatter_frequency);
  if (line.shatter_frequency != 0.0) {
    out.passed = false;
    out.detail += " n=1,M=3 frequency nonzero;";
  }
  if (plane.shatter_frequency != 1.0) {
    out.passed = false;
    out.detail += " n=2,M=3 frequency below one;";
  }
  double prev_freq = 0.0, prev_se = 0.0;
  for (int n = 2; n <= 8; ++n) {
    const ShatterReport rep = shattering_experiment(
        n, 20, 600, 0x14C + static_cast<std::uint64_t>(n));
    out.metrics.push_back(rep.shatter_frequency);
    if (n > 2) {
      const double step_sigma =
          std::sqrt(prev_se * prev_se + rep.std_error * rep.std_error);
      if (rep.shatter_frequency < prev_freq - 4.0 * step_sigma) {
        out.passed = false;
        out.detail += " trend decreases at n=" + std::to_string(n) + ";";
      }
    }
    prev_freq = rep.shatter_frequency;
    prev_se = rep.std_error;
  }
  if (out.passed) {
    out.detail = "trivia exact; trend";
    for (std::size_t i = 2; i < out.metrics.size(); ++i) {
      out.detail += (i == 2 ? " " : " -> ") + fmt(out.metrics[i]);
    }
  }
  return out;
}

// ---- 15: distinguishing sanity -----------------------------------------

Outcome distinguishing_sanity() {
  // The N = 1 antipodal case has exact TV = 2 cap(1/2; n=3)^2 = 0.125;
  // regression floor pinned at 0.10.
  constexpr double kPinnedTvFloor = 0.10;
  Outcome out;
  out.passed = true;

  DistinguishConfig q1;
  q1.n = 8;
  q1.q = 1;
  q1.halfspace_count = 16;
  q1.trials = 10000;
  q1.seed = 0x15A;
  q1.typicality_budget = 1000;
  q1.bootstrap_resamples = 100;
  const DistinguishReport rep1 = distinguishing_experiment(q1);
  out.metrics.push_back(rep1.tv_empirical);
  if (rep1.tv_empirical > rep1.marginal_4sigma[0]) {
    out.passed = false;
    out.detail += " q=1 TV " + fmt(rep1.tv_empirical) + " beyond 4 sigma;";
  }

  DistinguishConfig anti;
  anti.n = 3;
  anti.q = 2;
  anti.halfspace_count = 1;
  anti.r = 1.0;
  anti.trials = 20000;
  anti.seed = 0x15B;
  anti.typicality_budget = 1000;
  anti.bootstrap_resamples = 100;
  Vec z = Vec::Zero(3);
  z[0] = 2.0;
  anti.points_override = std::vector<Vec>{z, -z};
  const DistinguishReport rep2 = distinguishing_experiment(anti);
  out.metrics.push_back(rep2.tv_empirical);
  if (rep2.tv_empirical < kPinnedTvFloor) {
    out.passed = false;
    out.detail += " antipodal TV " + fmt(rep2.tv_empirical) +
                  " under the pinned floor " + fmt(kPinnedTvFloor) + ";";
  }

  DistinguishConfig scaled;
  scaled.n = 16;
  scaled.q = 4;
  scaled.halfspace_count = 16;
  scaled.trials = 20000;
  scaled.seed = 0x15C;
  scaled.typicality_budget = 20000;
  scaled.bootstrap_resamples = 200;
  const DistinguishReport rep3 = distinguishing_experiment(scaled);
  out.metrics.push_back(rep3.tv_empirical);  // tracked, not asserted

  if (out.passed) {
    out.detail = "q=1 TV " + fmt(rep1.tv_empirical) + "; antipodal TV " +
                 fmt(rep2.tv_empirical) + " >= " + fmt(kPinnedTvFloor) +
                 "; scaled-regime TV " + fmt(rep3.tv_empirical) +
                 " (tracked metric)";
  }
  return out;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, CriterionFn>> criteria{
      {"cap exactness", cap_exactness},
      {"cap upper bound", cap_bound},
      {"chi-squared tail", chi2_tail},
      {"shell partition", shell_partition},
      {"marginal identity", marginal_identity},
      {"rho anchor", rho_anchor},
      {"hull oracle equivalence", hull_oracle_equivalence},
      {"Ball's theorem", ball_theorem},
      {"thickened-boundary bound", thickened_boundary},
      {"one-sided soundness", one_sided_soundness},
      {"one-sided power", one_sided_power},
      {"two-sided realizable learning", two_sided_realizable},
      {"internal-cube lemma", internal_cube_lemma},
      {"shattering trivia and trend", shattering_trend},
      {"distinguishing sanity", distinguishing_sanity},
  };

  bool all_passed = true;
  bool deterministic = true;
  std::vector<Outcome> first_pass;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto start = std::chrono::steady_clock::now();
    Outcome outcome = criteria[i].second();
    const double sec =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    std::cout << (outcome.passed ? "[PASS]" : "[FAIL]") << " criterion "
              << (i + 1) << ": " << criteria[i].first << " -- "
              << outcome.detail << " (" << fmt(sec) << " s)\n"
              << std::flush;
    all_passed = all_passed && outcome.passed;
    first_pass.push_back(std::move(outcome));
  }

  // Criterion 16: every metric reproduces byte-for-byte under a re-run.
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const Outcome again = criteria[i].second();
    const auto& a = first_pass[i].metrics;
    const auto& b = again.metrics;
    const bool same =
        a.size() == b.size() &&
        (a.empty() ||
         std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0);
    if (!same) {
      deterministic = false;
      std::cout << "  determinism break in criterion " << (i + 1) << "\n";
    }
  }
  std::cout << (deterministic ? "[PASS]" : "[FAIL]")
            << " criterion 16: determinism -- metrics of criteria 1-15 "
            << (deterministic ? "reproduce byte-for-byte" : "drifted")
            << " under re-run\n";

  return all_passed && deterministic ? 0 : 1;
}
