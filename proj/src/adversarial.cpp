#include "ctb/adversarial.hpp"

#include <algorithm>
#include <cmath>

#include "ctb/lp.hpp"
#include "ctb/quadrature.hpp"
#include "ctb/rng.hpp"

namespace ctb {

int default_shell_count(int n) {
  const double sqn = std::ceil(std::sqrt(static_cast<double>(n)));
  const double count = std::exp2(sqn);
  return static_cast<int>(std::max(count, 64.0));
}

RandomPolytopeSet sample_dyes(int n, std::int64_t halfspace_count, double r,
                              std::uint64_t seed) {
  return RandomPolytopeSet::sample(n, halfspace_count, r, seed);
}

std::vector<double> build_shells(int n, int shell_count) {
  if (shell_count < 1) throw ValidationError("build_shells: M >= 1 required");
  const double outer = 2.0 * std::sqrt(static_cast<double>(n));
  const double total = gaussian_mass_of_radial_band(n, 0.0, outer);
  std::vector<double> boundaries(static_cast<std::size_t>(shell_count) + 1);
  boundaries.front() = 0.0;
  boundaries.back() = outer;
  for (int i = 1; i < shell_count; ++i) {
    const double target = total * static_cast<double>(i) / shell_count;
    const auto f = [&](double t) {
      return gaussian_mass_of_radial_band(n, 0.0, t) - target;
    };
    boundaries[static_cast<std::size_t>(i)] =
        bisect(f, boundaries[static_cast<std::size_t>(i) - 1], outer, 1e-13, 200);
  }
  return boundaries;
}

ShellPartition sample_dno(const std::vector<double>& boundaries,
                          const RadialFn& rho_fn, std::uint64_t seed) {
  if (boundaries.size() < 2) {
    throw ValidationError("sample_dno: need at least one shell");
  }
  ShellPartition partition;
  partition.boundaries = boundaries;
  RngStream stream(seed);
  const std::size_t shells = boundaries.size() - 1;
  partition.included.resize(shells);
  partition.rho_at_boundaries.resize(shells);
  for (std::size_t i = 0; i < shells; ++i) {
    const double p = rho_fn(boundaries[i + 1]);
    partition.rho_at_boundaries[i] = p;
    partition.included[i] = stream.next_double() < p ? 1 : 0;
  }
  return partition;
}

ShellUnionSet dno_target(int n, const ShellPartition& partition) {
  return ShellUnionSet(n, partition.boundaries, partition.included);
}

double max_rho_shell_deviation(const std::vector<double>& boundaries,
                               const RadialFn& rho_fn, int grid_points) {
  double worst = 0.0;
  for (std::size_t i = 1; i < boundaries.size(); ++i) {
    const double at_boundary = rho_fn(boundaries[i]);
    for (int g = 0; g <= grid_points; ++g) {
      const double x = boundaries[i - 1] +
                       (boundaries[i] - boundaries[i - 1]) * g / grid_points;
      worst = std::max(worst, std::abs(rho_fn(x) - at_boundary));
    }
  }
  return worst;
}

std::vector<char> sample_eno_star(const std::vector<Vec>& points,
                                  const RadialFn& rho_fn, std::uint64_t seed) {
  RngStream stream(seed);
  std::vector<char> labels(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) {
    labels[i] = stream.next_double() < rho_fn(points[i].norm()) ? 1 : 0;
  }
  return labels;
}

TypicalityReport typicality_check(const std::vector<Vec>& points, double r,
                                  const CapTable& table,
                                  std::int64_t mc_budget, std::uint64_t seed,
                                  TypicalityThresholds thresholds) {
  TypicalityReport report;
  report.thresholds = thresholds;
  report.r = r;
  report.mc_budget = mc_budget;
  const double r_sq = r * r;
  const double lo = std::exp(-thresholds.single_lo_exponent * r_sq);
  const double hi = std::exp(-thresholds.single_hi_exponent * r_sq);
  const double pair_cut = std::exp(-thresholds.pair_exponent * r_sq);

  bool typical = true;
  for (const Vec& z : points) {
    const double norm = z.norm();
    // fsa(cover(z)) = cap(r / ||z||); the cover is empty inside Ball(r).
    const double fsa = (norm <= r) ? 0.0 : table.cap(std::min(r / norm, 1.0));
    report.fsa.push_back(fsa);
    const bool in_band = fsa >= lo && fsa <= hi;
    report.fsa_in_band.push_back(in_band ? 1 : 0);
    if (!in_band) typical = false;
  }

  const int n = points.empty() ? 1 : static_cast<int>(points.front().size());
  RngStream stream(seed);
  for (std::size_t i = 0; i < points.size(); ++i) {
    for (std::size_t j = i + 1; j < points.size(); ++j) {
      PairOverlap pair;
      pair.i = static_cast<int>(i);
      pair.j = static_cast<int>(j);
      for (std::int64_t s = 0; s < mc_budget; ++s) {
        const Vec y = stream.next_sphere_point(n, r);
        if (points[i].dot(y) > r_sq && points[j].dot(y) > r_sq) ++pair.hits;
      }
      pair.fsa_estimate = static_cast<double>(pair.hits) /
                          static_cast<double>(std::max<std::int64_t>(mc_budget, 1));
      // If even the threshold-level rate would produce under 10 hits, the
      // budget cannot resolve the comparison.
      pair.indeterminate =
          pair_cut * static_cast<double>(mc_budget) < 10.0 && pair.hits < 10;
      pair.below_threshold = pair.fsa_estimate <= pair_cut;
      if (pair.indeterminate) {
        report.indeterminate = true;
      } else if (!pair.below_threshold) {
        typical = false;
      }
      report.pairs.push_back(pair);
    }
  }
  report.is_typical = typical && !report.indeterminate;
  return report;
}

BitMatrix halfspace_matrix(const std::vector<Vec>& points,
                           const RandomPolytopeSet& polytope) {
  const Mat& normals = polytope.sphere_normals();
  const double r_sq = polytope.r() * polytope.r();
  BitMatrix m(static_cast<Index>(points.size()), normals.cols());
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = 0; j < m.cols(); ++j) {
      m(i, j) =
          points[static_cast<std::size_t>(i)].dot(normals.col(j)) <= r_sq ? 1
                                                                          : 0;
    }
  }
  return m;
}

bool nice_matrix_check(const BitMatrix& matrix) {
  const double root_n = std::sqrt(static_cast<double>(matrix.cols()));
  std::int64_t zeros = 0;
  for (Index j = 0; j < matrix.cols(); ++j) {
    int col_zeros = 0;
    for (Index i = 0; i < matrix.rows(); ++i) {
      if (matrix(i, j) == 0) {
        ++zeros;
        ++col_zeros;
      }
    }
    if (col_zeros > 1) return false;
  }
  return static_cast<double>(zeros) <= root_n;
}

DistinguishReport distinguishing_experiment(const DistinguishConfig& config) {
  if (config.q < 1 || config.q > 12) {
    throw ValidationError(
        "distinguishing experiment requires 1 <= q <= 12 (joint histogram)");
  }
  if (config.trials < 1) {
    throw ValidationError("distinguishing experiment requires trials >= 1");
  }
  const int n = config.n;
  const CapTable table(n);
  double r = config.r;
  if (!(r > 0.0)) {
    const LowerBoundParams lbp = derive_lower_bound_params(
        n, table, config.halfspace_count, std::nullopt);
    r = lbp.r;
  }

  RngStream stream(config.seed);
  std::vector<Vec> points;
  if (config.points_override) {
    points = *config.points_override;
    if (static_cast<int>(points.size()) != config.q) {
      throw ValidationError("points override must supply exactly q points");
    }
  } else {
    for (int i = 0; i < config.q; ++i) {
      points.push_back(stream.next_gaussian_vec(n));
    }
  }

  DistinguishReport report;
  report.q = config.q;
  report.trials = config.trials;
  report.r = r;
  for (const Vec& z : points) {
    report.rho_values.push_back(rho(z.norm(), r, config.halfspace_count, table));
  }
  report.typicality =
      typicality_check(points, r, table, config.typicality_budget,
                       split_seed(config.seed, 0xA11CE));

  const std::size_t cells = std::size_t{1} << config.q;
  report.histogram.assign(cells, 0);
  std::vector<std::int64_t> marginal_ones(points.size(), 0);
  std::int64_t bad_matrices = 0;
  for (std::int64_t t = 0; t < config.trials; ++t) {
    const RandomPolytopeSet polytope = RandomPolytopeSet::sample(
        n, config.halfspace_count, r, split_seed(config.seed, 1 + static_cast<std::uint64_t>(t)));
    std::size_t cell = 0;
    const BitMatrix m = halfspace_matrix(points, polytope);
    for (std::size_t i = 0; i < points.size(); ++i) {
      bool inside = true;
      for (Index j = 0; j < m.cols(); ++j) {
        if (m(static_cast<Index>(i), j) == 0) {
          inside = false;
          break;
        }
      }
      if (inside) {
        cell |= std::size_t{1} << i;
        ++marginal_ones[i];
      }
    }
    ++report.histogram[cell];
    if (!nice_matrix_check(m)) ++bad_matrices;
  }
  report.bad_matrix_frequency =
      static_cast<double>(bad_matrices) / static_cast<double>(config.trials);

  for (std::size_t i = 0; i < points.size(); ++i) {
    const double freq = static_cast<double>(marginal_ones[i]) /
                        static_cast<double>(config.trials);
    const double p = report.rho_values[i];
    report.marginal_freq.push_back(freq);
    report.marginal_dev.push_back(std::abs(freq - p));
    report.marginal_4sigma.push_back(
        4.0 * std::sqrt(std::max(p * (1.0 - p), 1e-12) /
                        static_cast<double>(config.trials)));
  }

  // Exact product law vs empirical joint law.
  const auto tv_against_product = [&](const std::vector<std::int64_t>& hist) {
    double tv = 0.0;
    for (std::size_t cell = 0; cell < cells; ++cell) {
      double p = 1.0;
      for (std::size_t i = 0; i < points.size(); ++i) {
        const double rho_i = report.rho_values[i];
        p *= (cell >> i) & 1 ? rho_i : 1.0 - rho_i;
      }
      const double emp = static_cast<double>(hist[cell]) /
                         static_cast<double>(config.trials);
      tv += std::abs(emp - p);
    }
    return 0.5 * tv;
  };
  report.tv_empirical = tv_against_product(report.histogram);

  // Bootstrap CI: multinomial resamples of the observed histogram.
  if (config.bootstrap_resamples > 0) {
    RngStream boot(split_seed(config.seed, 0xB007));
    std::vector<double> cdf(cells);
    double acc = 0.0;
    for (std::size_t cell = 0; cell < cells; ++cell) {
      acc += static_cast<double>(report.histogram[cell]) /
             static_cast<double>(config.trials);
      cdf[cell] = acc;
    }
    std::vector<double> tvs;
    std::vector<std::int64_t> resample(cells);
    for (int b = 0; b < config.bootstrap_resamples; ++b) {
      std::fill(resample.begin(), resample.end(), 0);
      for (std::int64_t t = 0; t < config.trials; ++t) {
        const double u = boot.next_double();
        const auto it = std::lower_bound(cdf.begin(), cdf.end(), u);
        const auto cell = static_cast<std::size_t>(
            std::min<std::ptrdiff_t>(it - cdf.begin(),
                                     static_cast<std::ptrdiff_t>(cells) - 1));
        ++resample[cell];
      }
      tvs.push_back(tv_against_product(resample));
    }
    std::sort(tvs.begin(), tvs.end());
    const auto at = [&](double quantile) {
      const auto idx = static_cast<std::size_t>(
          quantile * static_cast<double>(tvs.size() - 1));
      return tvs[idx];
    };
    report.tv_ci_lo = at(0.025);
    report.tv_ci_hi = at(0.975);
  }
  return report;
}

ShatterReport shattering_experiment(int n, int m, std::int64_t trials,
                                    std::uint64_t seed) {
  if (m < 2) throw ValidationError("shattering experiment requires M >= 2");
  if (trials < 1) throw ValidationError("shattering experiment requires trials >= 1");
  ShatterReport report;
  report.m = m;
  report.trials = trials;
  const double sqn_over_10 = std::sqrt(static_cast<double>(n)) / 10.0;
  const double m_d = static_cast<double>(m);
  report.small_norm_bound = 0.5 / (m_d * m_d);
  report.dot_tail_bound = 0.5 / (m_d * m_d * m_d);

  RngStream stream(seed);
  std::int64_t shattered = 0;
  std::int64_t small_norm = 0;
  std::int64_t dot_tail = 0;
  Mat pts(n, m);
  Mat others(n, m - 1);
  report.trial_outcomes.resize(static_cast<std::size_t>(trials));
  for (std::int64_t t = 0; t < trials; ++t) {
    for (int i = 0; i < m; ++i) {
      pts.col(i) = stream.next_gaussian_vec(n);
      if (pts.col(i).norm() <= sqn_over_10) ++small_norm;
      if (pts(0, i) >= sqn_over_10) ++dot_tail;
    }
    bool all_extreme = true;
    for (int i = 0; i < m && all_extreme; ++i) {
      Index col = 0;
      for (int j = 0; j < m; ++j) {
        if (j != i) others.col(col++) = pts.col(j);
      }
      if (conv_membership(pts.col(i).eval(), others)) all_extreme = false;
    }
    report.trial_outcomes[static_cast<std::size_t>(t)] = all_extreme ? 1 : 0;
    if (all_extreme) ++shattered;
  }
  const double total_points = static_cast<double>(trials) * m_d;
  report.shatter_frequency =
      static_cast<double>(shattered) / static_cast<double>(trials);
  report.std_error = std::sqrt(
      std::max(report.shatter_frequency * (1.0 - report.shatter_frequency), 0.0) /
      static_cast<double>(trials));
  report.small_norm_frequency = static_cast<double>(small_norm) / total_points;
  report.dot_tail_frequency = static_cast<double>(dot_tail) / total_points;
  return report;
}

}  // namespace ctb
