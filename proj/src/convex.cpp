#include "ctb/convex.hpp"

#include <cmath>
#include <limits>

#include "ctb/lp.hpp"

namespace ctb {

namespace {

double binomial_se(double p_hat, std::int64_t samples) {
  return std::sqrt(std::max(p_hat * (1.0 - p_hat), 0.0) /
                   static_cast<double>(samples));
}

}  // namespace

McEstimate estimate_distance(int n, const TargetSet& a, const TargetSet& b,
                             std::int64_t samples, std::uint64_t seed) {
  if (samples < 1) throw ValidationError("estimate_distance: samples >= 1");
  RngStream stream(seed);
  std::int64_t disagree = 0;
  for (std::int64_t i = 0; i < samples; ++i) {
    const Vec x = stream.next_gaussian_vec(n);
    if (a.contains(x) != b.contains(x)) ++disagree;
  }
  McEstimate out;
  out.samples = samples;
  out.estimate = static_cast<double>(disagree) / static_cast<double>(samples);
  out.std_error = binomial_se(out.estimate, samples);
  return out;
}

McEstimate estimate_volume(int n, const TargetSet& a, std::int64_t samples,
                           std::uint64_t seed) {
  EmptySet empty;
  return estimate_distance(n, a, empty, samples, seed);
}

double thickened_boundary_bound(int n, double k_bound, double alpha) {
  return 20.0 * std::pow(static_cast<double>(n), 5.0 / 8.0) * k_bound *
         std::sqrt(alpha);
}

BoundaryVolumeEstimate estimate_thickened_boundary_volume(
    int n, const TargetSet& c, double alpha, double k_bound,
    std::int64_t samples, std::uint64_t seed) {
  if (!(alpha > 0.0 && alpha < std::pow(static_cast<double>(n), -0.75))) {
    throw ValidationError(
        "thickened boundary volume requires 0 < alpha < n^(-3/4)");
  }
  if (!c.supports_dilation()) {
    throw ValidationError("target kind '" + c.kind() +
                          "' lacks the analytic boundary-distance test");
  }
  RngStream stream(seed);
  std::int64_t hits = 0;
  for (std::int64_t i = 0; i < samples; ++i) {
    const Vec x = stream.next_gaussian_vec(n);
    if (c.in_dilation(x, alpha) && !c.in_erosion(x, alpha)) ++hits;
  }
  BoundaryVolumeEstimate out;
  out.samples_used = samples;
  out.alpha = alpha;
  out.k_bound = k_bound;
  out.estimate = static_cast<double>(hits) / static_cast<double>(samples);
  out.std_error = binomial_se(out.estimate, samples);
  return out;
}

BallTheoremReport check_ball_theorem(int n, const TargetSet& c, double h,
                                     std::int64_t samples,
                                     std::uint64_t seed) {
  if (!(h > 0.0)) throw ValidationError("check_ball_theorem: h > 0 required");
  if (!c.supports_dilation()) {
    throw ValidationError("target kind '" + c.kind() +
                          "' lacks the analytic dilation test");
  }
  RngStream stream(seed);
  std::int64_t hits = 0;
  for (std::int64_t i = 0; i < samples; ++i) {
    const Vec x = stream.next_gaussian_vec(n);
    if (c.in_dilation(x, h) && !c.contains(x)) ++hits;
  }
  BallTheoremReport out;
  out.h = h;
  out.vol_estimate = static_cast<double>(hits) / static_cast<double>(samples);
  out.std_error = binomial_se(out.vol_estimate, samples);
  out.ratio = out.vol_estimate / h;
  out.bound = 4.0 * std::pow(static_cast<double>(n), 0.25);
  out.passed = (out.vol_estimate - 4.0 * out.std_error) / h <= out.bound;
  return out;
}

double radial_exit(const Mat& generators, const Vec& direction,
                   double upper_hint) {
  if (!conv_membership(Vec::Zero(direction.size()), generators)) {
    throw ValidationError("radial_exit: origin not inside the hull");
  }
  double lo = 0.0;
  double hi = std::max(upper_hint, 1e-6);
  int guard = 0;
  while (conv_membership((hi * direction).eval(), generators)) {
    lo = hi;
    hi *= 2.0;
    if (++guard > 80) {
      throw ValidationError("radial_exit: hull appears unbounded");
    }
  }
  for (int i = 0; i < 80; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (conv_membership((mid * direction).eval(), generators)) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

namespace {

// Hull generators guaranteed to contain Ball(rho) and stay inside Ball(K):
// the cross-polytope vertices at radius rho*sqrt(n) plus random sphere
// points with radii in [rho*sqrt(n), K].
Mat containing_polytope(int n, double rho, double k_bound, int extra,
                        RngStream& stream) {
  const double base = rho * std::sqrt(static_cast<double>(n));
  if (base > k_bound) {
    throw ValidationError(
        "polytope family requires k_bound >= rho * sqrt(n)");
  }
  Mat g(n, 2 * n + extra);
  g.setZero();
  for (int i = 0; i < n; ++i) {
    g(i, 2 * i) = base;
    g(i, 2 * i + 1) = -base;
  }
  for (int j = 0; j < extra; ++j) {
    const double radius = base + (k_bound - base) * stream.next_double();
    g.col(2 * n + j) = stream.next_sphere_point(n, radius);
  }
  return g;
}

AppendixLemmaReport check_no_ball_volume(const AppendixLemmaConfig& cfg) {
  // C is a thin axis-aligned box: full length along every axis but the
  // first, and width < 2 rho along the first, so it contains no ball of
  // radius rho. alpha-dilation distance to a box is analytic.
  AppendixLemmaReport rep;
  const int n = cfg.n;
  Vec half(n);
  half[0] = 0.9 * cfg.rho;
  for (int i = 1; i < n; ++i) half[i] = cfg.k_bound;
  if (cfg.family == "segment") {
    half[0] = 0.0;
    for (int i = 2; i < n; ++i) half[i] = 0.0;
  } else if (cfg.family != "box") {
    throw ValidationError("no-ball-volume families: box, segment");
  }
  RngStream stream(cfg.seed);
  std::int64_t hits = 0;
  for (std::int64_t i = 0; i < cfg.samples; ++i) {
    const Vec x = stream.next_gaussian_vec(n);
    double d2 = 0.0;
    for (int j = 0; j < n; ++j) {
      const double excess = std::abs(x[j]) - half[j];
      if (excess > 0.0) d2 += excess * excess;
    }
    if (d2 <= cfg.alpha * cfg.alpha) ++hits;
  }
  const double est = static_cast<double>(hits) / cfg.samples;
  const double se = binomial_se(est, cfg.samples);
  rep.bound = 2.0 * (n * cfg.rho + cfg.alpha);
  rep.observed = est;
  rep.margin = rep.bound - (est + 4.0 * se);
  rep.passed = rep.margin >= 0.0;
  rep.detail = "Vol(C + Ball(alpha)) estimate " + std::to_string(est) +
               " +- " + std::to_string(se);
  return rep;
}

AppendixLemmaReport check_shrunken_distance(const AppendixLemmaConfig& cfg) {
  AppendixLemmaReport rep;
  const int n = cfg.n;
  const double rho = cfg.rho;
  const double alpha = cfg.alpha;
  if (!(rho > alpha)) {
    throw ValidationError("shrunken-distance requires rho > alpha");
  }
  const double shrink = 1.0 - alpha / rho;
  RngStream stream(cfg.seed);
  double min_dist = std::numeric_limits<double>::infinity();
  if (cfg.family == "ball") {
    // Exact radial case: dist(boundary point, Ball(rho - alpha)) = alpha.
    for (std::int64_t i = 0; i < cfg.samples; ++i) {
      const Vec z = stream.next_sphere_point(n, rho);
      min_dist = std::min(min_dist, z.norm() - shrink * rho);
    }
  } else if (cfg.family == "polytope") {
    const Mat g = containing_polytope(n, rho, cfg.k_bound, 3 * n, stream);
    const Mat g_shrunk = shrink * g;
    for (std::int64_t i = 0; i < cfg.samples; ++i) {
      const Vec dir = stream.next_sphere_point(n, 1.0);
      const double exit = radial_exit(g, dir, rho);
      const Vec z = exit * dir;
      // Certified lower bound on the distance to the shrunken polytope.
      min_dist = std::min(min_dist, distance_to_hull(z, g_shrunk).lower);
    }
  } else {
    throw ValidationError("shrunken-distance families: ball, polytope");
  }
  rep.bound = alpha;
  rep.observed = min_dist;
  rep.margin = min_dist - alpha;
  rep.passed = rep.margin >= -1e-6;
  rep.detail = "min distance from boundary samples to shrunken set";
  return rep;
}

AppendixLemmaReport check_thickened_containment(
    const AppendixLemmaConfig& cfg) {
  AppendixLemmaReport rep;
  const int n = cfg.n;
  const double beta = cfg.beta;
  const double alpha = cfg.alpha;
  if (!(beta > 0.0 && beta < 1.0)) {
    throw ValidationError("thickened-containment requires beta in (0,1)");
  }
  RngStream stream(cfg.seed);
  double max_dist = 0.0;
  if (cfg.family == "ball") {
    const double k = cfg.k_bound;
    for (std::int64_t i = 0; i < cfg.samples; ++i) {
      const Vec z = stream.next_sphere_point(n, k);
      const double jitter =
          alpha * std::pow(stream.next_double(), 1.0 / n);
      const Vec v = z + stream.next_sphere_point(n, jitter);
      max_dist = std::max(max_dist, v.norm() - (1.0 - beta) * k);
    }
  } else if (cfg.family == "polytope") {
    const Mat g =
        containing_polytope(n, cfg.k_bound / (2.0 * std::sqrt(1.0 * n)),
                            cfg.k_bound, 3 * n, stream);
    const Mat g_shrunk = (1.0 - beta) * g;
    for (std::int64_t i = 0; i < cfg.samples; ++i) {
      const Vec dir = stream.next_sphere_point(n, 1.0);
      const double exit = radial_exit(g, dir, cfg.k_bound);
      const double jitter =
          alpha * std::pow(stream.next_double(), 1.0 / n);
      const Vec v = exit * dir + stream.next_sphere_point(n, jitter);
      max_dist = std::max(max_dist, distance_to_hull(v, g_shrunk).upper);
    }
  } else {
    throw ValidationError("thickened-containment families: ball, polytope");
  }
  rep.bound = 2.0 * cfg.k_bound * beta + alpha;
  rep.observed = max_dist;
  rep.margin = rep.bound - max_dist;
  rep.passed = rep.margin >= -1e-6;
  rep.detail = "max distance from thickened-boundary samples to shrunken set";
  return rep;
}

}  // namespace

AppendixLemmaReport check_appendix_lemma(const AppendixLemmaConfig& config) {
  switch (config.lemma) {
    case AppendixLemmaConfig::Lemma::kNoBallVolume:
      return check_no_ball_volume(config);
    case AppendixLemmaConfig::Lemma::kShrunkenDistance:
      return check_shrunken_distance(config);
    case AppendixLemmaConfig::Lemma::kThickenedContainment:
      return check_thickened_containment(config);
  }
  throw ValidationError("unknown appendix lemma");
}

}  // namespace ctb
