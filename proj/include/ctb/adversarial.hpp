#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "ctb/gauss.hpp"
#include "ctb/target_set.hpp"
#include "ctb/types.hpp"

namespace ctb {

/// Equal-mass radial shell structure of the no-distribution: boundaries
/// 0 = t_0 < ... < t_M = 2 sqrt(n), per-shell inclusion bits drawn
/// Bernoulli(rho(t_i)), and the rho values at the boundaries.
struct ShellPartition {
  std::vector<double> boundaries;
  std::vector<char> included;
  std::vector<double> rho_at_boundaries;
};

using RadialFn = std::function<double(double)>;

/// Default shell count max(2^ceil(sqrt(n)), 64).
int default_shell_count(int n);

/// Draws the yes-distribution polytope: N normals uniform on the sphere of
/// radius r.
RandomPolytopeSet sample_dyes(int n, std::int64_t halfspace_count, double r,
                              std::uint64_t seed);

/// Boundaries t_0..t_M splitting Ball(2 sqrt(n)) into M shells of equal
/// Gaussian mass; t_M = 2 sqrt(n) exactly.
std::vector<double> build_shells(int n, int shell_count);

/// Draws the no-distribution set: shell i included independently with
/// probability rho(t_i).
ShellPartition sample_dno(const std::vector<double>& boundaries,
                          const RadialFn& rho_fn, std::uint64_t seed);

/// The shell union as a membership oracle.
ShellUnionSet dno_target(int n, const ShellPartition& partition);

/// Largest |rho(x) - rho(t_i)| over a uniform x-grid inside each shell:
/// the discretization error of the shell construction, reported against
/// the 2^{-sqrt(n)} target and driven to zero by growing M.
double max_rho_shell_deviation(const std::vector<double>& boundaries,
                               const RadialFn& rho_fn, int grid_points = 16);

/// Independent product labels: bit i is 1 with probability rho(||x_i||).
std::vector<char> sample_eno_star(const std::vector<Vec>& points,
                                  const RadialFn& rho_fn, std::uint64_t seed);

/// Typicality thresholds as exponents of r^2; the defaults suit the
/// asymptotic regime and may need loosening at desk-scale r (the report
/// records the values used).
struct TypicalityThresholds {
  double single_lo_exponent = 0.51;  // fsa >= e^{-0.51 r^2}
  double single_hi_exponent = 0.49;  // fsa <= e^{-0.49 r^2}
  double pair_exponent = 0.96;       // pairwise fsa <= e^{-0.96 r^2}
};

struct PairOverlap {
  int i = 0;
  int j = 0;
  double fsa_estimate = 0.0;
  std::int64_t hits = 0;
  bool below_threshold = false;
  bool indeterminate = false;  // too few expected hits to resolve
};

struct TypicalityReport {
  std::vector<double> fsa;  // exact per-point, cap(r / ||z_i||)
  std::vector<char> fsa_in_band;
  std::vector<PairOverlap> pairs;
  bool is_typical = false;
  bool indeterminate = false;
  TypicalityThresholds thresholds;
  double r = 0.0;
  std::int64_t mc_budget = 0;
};

/// Per-point fractional surface areas are exact via the cap identity;
/// pairwise cap intersections are Monte Carlo over the sphere. Pairs whose
/// expected hit count is below 10 are flagged indeterminate rather than
/// asserted.
TypicalityReport typicality_check(const std::vector<Vec>& points, double r,
                                  const CapTable& table,
                                  std::int64_t mc_budget, std::uint64_t seed,
                                  TypicalityThresholds thresholds = {});

/// The q x N halfspace-membership matrix: entry (i, j) is 1 iff point i
/// satisfies halfspace j.
using BitMatrix = Eigen::Matrix<std::uint8_t, Eigen::Dynamic, Eigen::Dynamic>;

BitMatrix halfspace_matrix(const std::vector<Vec>& points,
                           const RandomPolytopeSet& polytope);

/// Nice iff at most sqrt(N) zero entries in total and at most one zero per
/// column.
bool nice_matrix_check(const BitMatrix& matrix);

struct DistinguishConfig {
  int n = 2;
  int q = 1;
  std::int64_t halfspace_count = 2;
  double r = 0.0;  // <= 0: derive from solve_r at the clamped alpha
  std::int64_t trials = 10000;
  std::uint64_t seed = 0;
  std::int64_t typicality_budget = 200000;
  int bootstrap_resamples = 200;
  std::optional<std::vector<Vec>> points_override;
};

struct DistinguishReport {
  int q = 0;
  std::int64_t trials = 0;
  double r = 0.0;
  std::vector<double> rho_values;      // exact marginals
  std::vector<double> marginal_freq;   // empirical marginals
  std::vector<double> marginal_dev;    // |freq - rho|
  std::vector<double> marginal_4sigma;
  double tv_empirical = 0.0;
  double tv_ci_lo = 0.0;
  double tv_ci_hi = 0.0;
  double bad_matrix_frequency = 0.0;
  std::vector<std::int64_t> histogram;  // 2^q cells of observed label words
  TypicalityReport typicality;
};

/// Empirical total variation between the labels of fixed points under fresh
/// yes-distribution polytopes and the independent product law with the
/// exactly computed marginals rho(||z_i||). q <= 12 keeps the joint
/// histogram tractable.
DistinguishReport distinguishing_experiment(const DistinguishConfig& config);

struct ShatterReport {
  int m = 0;
  std::int64_t trials = 0;
  double shatter_frequency = 0.0;  // all points extreme in all trials
  double std_error = 0.0;
  double small_norm_frequency = 0.0;  // Pr[||x|| <= sqrt(n)/10]
  double small_norm_bound = 0.0;      // M^{-2} / 2
  double dot_tail_frequency = 0.0;    // Pr[x . v >= sqrt(n)/10]
  double dot_tail_bound = 0.0;        // M^{-3} / 2
  std::vector<char> trial_outcomes;   // per-trial shattering bit (CSV log)
};

/// Frequency with which M Gaussian points are all hull-extreme (so every
/// labeling is realizable by a convex set), plus the two tail frequencies
/// that drive the union-bound argument.
ShatterReport shattering_experiment(int n, int m, std::int64_t trials,
                                    std::uint64_t seed);

}  // namespace ctb
