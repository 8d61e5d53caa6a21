#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "ctb/rng.hpp"
#include "ctb/types.hpp"

namespace ctb {

/// Parameters of the ambient standard Gaussian: dimension and RNG seed.
struct GaussParams {
  int n = 1;
  std::uint64_t seed = 0;
};

/// Fractional surface area of the spherical cap {x in S^{n-1} : x_1 >= t}.
///
/// For n >= 3 the value is a_n * Integral_t^1 (1-z^2)^{(n-3)/2} dz with the
/// normalization a_n fixed so that cap(0) = 1/2; the integral is evaluated
/// in the angle variable, where the integrand is smooth. n = 2 uses the
/// closed form arccos(t)/pi. n < 2 is rejected.
class CapTable {
 public:
  explicit CapTable(int n, double quadrature_tol = 1e-10);

  double cap(double t) const;
  int dim() const { return n_; }
  double normalization() const { return a_n_; }
  double quadrature_tol() const { return tol_; }

 private:
  int n_;
  double tol_;
  double a_n_;
};

/// Parameters of the two-sided lower-bound construction, with the clamps
/// and overrides applied at desk scale recorded for report provenance.
struct LowerBoundParams {
  int n = 0;
  std::int64_t halfspace_count = 0;  // N
  std::int64_t query_budget = 0;     // q
  double alpha = 0.0;                // sqrt(n) - 10, clamped from below
  double beta = 0.0;                 // sqrt(n) + 10
  double r = 0.0;                    // solves cap(r/alpha) = 1/N
  bool alpha_clamped = false;
  bool n_overridden = false;
  bool q_overridden = false;
};

/// Derives N, q, alpha, r from the dimension, applying the desk-scale
/// clamp alpha = max(sqrt(n)-10, 0.5*sqrt(n)) and optional explicit
/// overrides. An explicit r skips the cap-equation solve (and lifts the
/// N >= 2 requirement that the solve needs).
LowerBoundParams derive_lower_bound_params(
    int n, const CapTable& table,
    std::optional<std::int64_t> halfspace_count_override = std::nullopt,
    std::optional<std::int64_t> query_budget_override = std::nullopt,
    std::optional<double> r_override = std::nullopt);

/// count i.i.d. standard-normal points in R^n, deterministic given the seed.
std::vector<Vec> sample_gaussian(const GaussParams& params, std::int64_t count);

/// Tail bound for chi-squared: Pr[|X - n| >= t*n] <= exp(-(3/16) n t^2),
/// valid for t in [0, 1/2). Arguments outside that range are rejected.
double chi2_tail_bound(int n, double t);

/// true iff cap(t) <= exp(-n t^2 / 2) + quadrature_tol.
bool cap_upper_bound_check(const CapTable& table, double t);

/// Unique r in [0, alpha] with cap(r/alpha) = 1/N, by bisection
/// (cap is strictly decreasing). Throws if N < 2.
double solve_r(const CapTable& table, std::int64_t halfspace_count,
               double alpha);

/// rho(x) = (1 - cap(r/x))^N, with cap(u) := 0 for u >= 1 so that points
/// inside Ball(r) always survive. Monotone non-increasing in x.
double rho(double x, double r, std::int64_t halfspace_count,
           const CapTable& table);

/// Pr[a <= ||x|| <= b] for x drawn from the standard Gaussian in R^n,
/// via adaptive quadrature of the chi density. b may be +infinity.
double gaussian_mass_of_radial_band(int n, double a, double b);

}  // namespace ctb
