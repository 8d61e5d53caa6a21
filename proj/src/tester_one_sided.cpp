#include "ctb/tester_one_sided.hpp"

#include <cmath>
#include <functional>
#include <unordered_map>

#include "ctb/lp.hpp"
#include "ctb/rng.hpp"

namespace ctb {

LabeledSample truncate_labels(LabeledSample sample, double n_prime) {
  if (sample.x.norm() > n_prime) sample.label = false;
  return sample;
}

namespace {

std::int64_t default_sample_budget(const Grid& grid) {
  const double cubes = static_cast<double>(grid.cube_count());
  const double budget = (std::log(cubes) + 3.0) / grid.min_cube_mass();
  return static_cast<std::int64_t>(std::ceil(budget));
}

LabeledSample draw_truncated(const TargetSet& target, double n_prime,
                             RngStream& stream, int n) {
  LabeledSample s;
  s.x = stream.next_gaussian_vec(n);
  s.label = target.contains(s.x);
  return truncate_labels(std::move(s), n_prime);
}

// Step 1 of the run: budget truncated samples in columnar form.
void draw_sample_set(const TargetSet& target, int n, double n_prime,
                     std::int64_t budget, RngStream& stream, Mat& points,
                     std::vector<char>& labels) {
  points.resize(n, budget);
  labels.resize(static_cast<std::size_t>(budget));
  Vec buf(n);
  for (std::int64_t i = 0; i < budget; ++i) {
    for (int d = 0; d < n; ++d) points(d, i) = stream.next_gaussian();
    buf = points.col(i);
    labels[static_cast<std::size_t>(i)] =
        (buf.norm() <= n_prime && target.contains(buf)) ? 1 : 0;
  }
}

std::int64_t resolve_budget(const OneSidedConfig& config, const Grid& grid) {
  return config.sample_budget > 0 ? config.sample_budget
                                  : default_sample_budget(grid);
}

}  // namespace

OneSidedVerdict run_a_star(const TargetSet& target,
                           const OneSidedConfig& config) {
  const Grid grid = Grid::build(config.grid);
  const int n = config.grid.n;
  const double n_prime = config.grid.n_prime;
  const std::int64_t budget = resolve_budget(config, grid);
  const double threshold = config.reject_threshold >= 0.0
                               ? config.reject_threshold
                               : config.grid.epsilon / 4.0;
  RngStream stream(config.seed);

  OneSidedVerdict verdict;
  verdict.samples_used = budget;
  verdict.reject_threshold = threshold;

  // Step 1: the labeled sample set T, truncated to Ball(n').
  Mat points;
  std::vector<char> labels;
  draw_sample_set(target, n, n_prime, budget, stream, points, labels);
  Vec buf(n);

  // Step 2: accept early when some cube holds no sample.
  const CubeClassification classes = classify_cubes(grid, points, labels);
  verdict.bc_mass = classes.bc_mass;
  if (!classes.all_cubes_occupied()) {
    verdict.early_accept_empty_cube = true;
    return verdict;
  }

  // Step 3: reject when the boundary cubes carry too much mass. The
  // certificate pins down each boundary cube with a positive/negative
  // witness pair so the mass can be re-derived from scratch.
  if (classes.bc_mass >= threshold) {
    RejectionCertificate cert;
    cert.kind = RejectionCertificate::Kind::kBcMassExcess;
    cert.bc_mass = classes.bc_mass;
    cert.threshold = threshold;
    std::unordered_map<CubeIndex, Vec, CubeIndexHash> pos_witness, neg_witness;
    CubeIndex cube;
    cube.coords.resize(static_cast<std::size_t>(n));
    for (std::int64_t i = 0; i < budget; ++i) {
      buf = points.col(i);
      if (!grid.locate_into(buf, cube)) continue;
      auto& map = labels[static_cast<std::size_t>(i)] ? pos_witness : neg_witness;
      map.try_emplace(cube, buf);
    }
    for (const auto& [bcube, cls] : classes.positive_cubes) {
      if (cls != CubeClass::kBoundary) continue;
      BoundaryCubeEvidence ev;
      ev.cube = bcube;
      ev.positive_witness = pos_witness.at(bcube);
      // Find the adjacent cube holding a negative sample.
      CubeIndex probe;
      probe.coords = bcube.coords;
      const int dims = static_cast<int>(bcube.coords.size());
      bool found = false;
      std::function<void(int)> scan = [&](int axis) {
        if (found) return;
        if (axis == dims) {
          const auto it = neg_witness.find(probe);
          if (it != neg_witness.end()) {
            ev.negative_cube = probe;
            ev.negative_witness = it->second;
            found = true;
          }
          return;
        }
        for (int d = -1; d <= 1; ++d) {
          probe.coords[static_cast<std::size_t>(axis)] =
              bcube.coords[static_cast<std::size_t>(axis)] + d;
          scan(axis + 1);
        }
      };
      scan(0);
      cert.boundary_cubes.push_back(std::move(ev));
    }
    verdict.reject = true;
    verdict.certificate = std::move(cert);
    return verdict;
  }

  // Step 4: the hull of the positive samples.
  std::int64_t n_pos = 0;
  for (const char l : labels) n_pos += l;
  Mat positives(n, n_pos);
  Index col = 0;
  for (std::int64_t i = 0; i < budget; ++i) {
    if (labels[static_cast<std::size_t>(i)]) positives.col(col++) = points.col(i);
  }

  // Step 5: probe one fresh point.
  const LabeledSample fresh = draw_truncated(target, n_prime, stream, n);
  if (n_pos > 0 && !fresh.label && conv_membership(fresh.x, positives)) {
    RejectionCertificate cert;
    cert.kind = RejectionCertificate::Kind::kHullViolation;
    cert.witness = fresh.x;
    cert.positive_generators = std::move(positives);
    verdict.reject = true;
    verdict.certificate = std::move(cert);
  }
  return verdict;
}

CubeClassification classify_a_star_samples(const TargetSet& target,
                                           const OneSidedConfig& config,
                                           const Grid& grid) {
  RngStream stream(config.seed);
  Mat points;
  std::vector<char> labels;
  draw_sample_set(target, config.grid.n, config.grid.n_prime,
                  resolve_budget(config, grid), stream, points, labels);
  return classify_cubes(grid, points, labels);
}

OneSidedVerdict run_a_prime(const TargetSet& target,
                            const OneSidedConfig& config) {
  OneSidedVerdict last;
  for (int run = 0; run < config.runs; ++run) {
    OneSidedConfig sub = config;
    sub.seed = split_seed(config.seed, static_cast<std::uint64_t>(run));
    OneSidedVerdict verdict = run_a_star(target, sub);
    if (verdict.reject) {
      verdict.rejecting_run = run;
      return verdict;
    }
    last = std::move(verdict);
  }
  return last;
}

bool verify_certificate(const OneSidedVerdict& verdict,
                        const TargetSet& target,
                        const OneSidedConfig& config) {
  if (!verdict.reject || !verdict.certificate) return false;
  const RejectionCertificate& cert = *verdict.certificate;
  const Grid grid = Grid::build(config.grid);
  const double n_prime = config.grid.n_prime;

  const auto truncated_label = [&](const Vec& x) {
    LabeledSample s{x, target.contains(x)};
    return truncate_labels(std::move(s), n_prime).label;
  };

  if (cert.kind == RejectionCertificate::Kind::kHullViolation) {
    if (truncated_label(cert.witness)) return false;
    return conv_membership(cert.witness, cert.positive_generators);
  }

  // Boundary-mass certificate: every evidenced cube must genuinely be a
  // boundary cube, and the exact masses must reach the threshold.
  double mass = 0.0;
  for (const BoundaryCubeEvidence& ev : cert.boundary_cubes) {
    const auto pos_cube = grid.locate(ev.positive_witness);
    if (!pos_cube || !(*pos_cube == ev.cube)) return false;
    if (!truncated_label(ev.positive_witness)) return false;
    const auto neg_cube = grid.locate(ev.negative_witness);
    if (!neg_cube || !(*neg_cube == ev.negative_cube)) return false;
    if (truncated_label(ev.negative_witness)) return false;
    for (std::size_t a = 0; a < ev.cube.coords.size(); ++a) {
      if (std::abs(ev.cube.coords[a] - ev.negative_cube.coords[a]) > 1) {
        return false;
      }
    }
    mass += grid.cube_mass(ev.cube);
  }
  return mass >= cert.threshold;
}

}  // namespace ctb
