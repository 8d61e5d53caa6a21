#include "ctb/gauss.hpp"

#include <cmath>
#include <limits>

#include "ctb/quadrature.hpp"

namespace ctb {

namespace {

// Integrand of the cap integral after the substitution z = sin(theta):
// cos(theta)^(n-2), smooth on [0, pi/2].
double cap_angle_integral(int n, double theta_lo, double tol) {
  return integrate(
      [n](double theta) { return std::pow(std::cos(theta), n - 2); }, theta_lo,
      M_PI / 2.0, tol);
}

}  // namespace

CapTable::CapTable(int n, double quadrature_tol) : n_(n), tol_(quadrature_tol) {
  if (n < 2) {
    throw ValidationError("CapTable requires n >= 2 (n=1 has no cap integral)");
  }
  if (n == 2) {
    a_n_ = 1.0 / M_PI;  // closed form, normalization unused by quadrature
    return;
  }
  const double half_integral = cap_angle_integral(n_, 0.0, 0.1 * tol_);
  a_n_ = 0.5 / half_integral;
}

double CapTable::cap(double t) const {
  if (t < 0.0 || t > 1.0) {
    throw ValidationError("cap(t) requires t in [0, 1]");
  }
  if (t == 1.0) return 0.0;
  if (n_ == 2) return std::acos(t) / M_PI;
  if (t == 0.0) return 0.5;
  return a_n_ * cap_angle_integral(n_, std::asin(t), 0.1 * tol_);
}

LowerBoundParams derive_lower_bound_params(
    int n, const CapTable& table,
    std::optional<std::int64_t> halfspace_count_override,
    std::optional<std::int64_t> query_budget_override,
    std::optional<double> r_override) {
  LowerBoundParams p;
  p.n = n;
  const double sqn = std::sqrt(static_cast<double>(n));
  if (halfspace_count_override) {
    p.halfspace_count = *halfspace_count_override;
    p.n_overridden = true;
  } else {
    p.halfspace_count =
        std::max<std::int64_t>(2, std::llround(std::exp2(sqn)));
  }
  if (query_budget_override) {
    p.query_budget = *query_budget_override;
    p.q_overridden = true;
  } else {
    p.query_budget =
        std::max<std::int64_t>(2, std::llround(std::exp2(0.01 * sqn)));
  }
  if (p.halfspace_count < (r_override ? 1 : 2)) {
    throw ValidationError(r_override
                              ? "halfspace count N must be at least 1"
                              : "halfspace count N must be at least 2");
  }
  const double raw_alpha = sqn - 10.0;
  p.alpha = std::max(raw_alpha, 0.5 * sqn);
  p.alpha_clamped = raw_alpha < 0.5 * sqn;
  p.beta = sqn + 10.0;
  p.r = r_override ? *r_override : solve_r(table, p.halfspace_count, p.alpha);
  return p;
}

std::vector<Vec> sample_gaussian(const GaussParams& params,
                                 std::int64_t count) {
  if (params.n < 1) throw ValidationError("GaussParams requires n >= 1");
  if (count < 0) throw ValidationError("sample count must be non-negative");
  RngStream stream(params.seed);
  std::vector<Vec> out;
  out.reserve(static_cast<std::size_t>(count));
  for (std::int64_t i = 0; i < count; ++i) {
    out.push_back(stream.next_gaussian_vec(params.n));
  }
  return out;
}

double chi2_tail_bound(int n, double t) {
  if (!(t >= 0.0 && t < 0.5)) {
    throw ValidationError("chi2_tail_bound requires t in [0, 1/2)");
  }
  return std::exp(-(3.0 / 16.0) * n * t * t);
}

bool cap_upper_bound_check(const CapTable& table, double t) {
  const double bound = std::exp(-0.5 * table.dim() * t * t);
  return table.cap(t) <= bound + table.quadrature_tol();
}

double solve_r(const CapTable& table, std::int64_t halfspace_count,
               double alpha) {
  if (halfspace_count < 2) {
    throw ValidationError("solve_r requires N >= 2");
  }
  if (!(alpha > 0.0)) throw ValidationError("solve_r requires alpha > 0");
  const double target = 1.0 / static_cast<double>(halfspace_count);
  const auto f = [&](double u) { return table.cap(u) - target; };
  const double f0 = f(0.0);
  if (f0 < 0.0) {
    throw InfeasibleError(
        "solve_r: cap(0) < 1/N, no root in (0, alpha) at this resolution",
        static_cast<double>(halfspace_count));
  }
  if (f0 == 0.0) return 0.0;
  // Bisection to interval collapse; residual is capped by quadrature_tol.
  const double u = bisect(f, 0.0, 1.0, 1e-12, 200);
  return u * alpha;
}

double rho(double x, double r, std::int64_t halfspace_count,
           const CapTable& table) {
  if (x < 0.0) throw ValidationError("rho requires x >= 0");
  if (x <= r) return 1.0;  // cover(z) is empty inside Ball(r)
  const double u = r / x;
  const double c = (u >= 1.0) ? 0.0 : table.cap(u);
  if (c >= 1.0) return 0.0;
  return std::exp(static_cast<double>(halfspace_count) * std::log1p(-c));
}

double gaussian_mass_of_radial_band(int n, double a, double b) {
  if (n < 1) throw ValidationError("radial band mass requires n >= 1");
  if (!(a >= 0.0) || b < a) {
    throw ValidationError("radial band mass requires 0 <= a <= b");
  }
  // Chi density support is concentrated near sqrt(n); beyond sqrt(n)+45 the
  // remaining mass is below any representable tolerance.
  const double cutoff = std::sqrt(static_cast<double>(n)) + 45.0;
  if (std::isinf(b)) {
    if (a == 0.0) return 1.0;
    return 1.0 - gaussian_mass_of_radial_band(n, 0.0, a);
  }
  const double hi = std::min(b, cutoff);
  const double lo = std::min(a, hi);
  const double log_norm =
      (0.5 * n - 1.0) * std::log(2.0) + std::lgamma(0.5 * n);
  const auto density = [n, log_norm](double x) {
    if (x <= 0.0) return (n == 1) ? std::exp(-log_norm) : 0.0;
    return std::exp((n - 1) * std::log(x) - 0.5 * x * x - log_norm);
  };
  return integrate(density, lo, hi, 1e-12);
}

}  // namespace ctb
