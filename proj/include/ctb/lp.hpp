#pragma once

#include <optional>

#include "ctb/types.hpp"

namespace ctb {

/// A convex-hull membership query: is query_point within lp_tol (infinity
/// norm of the spatial residual) of Conv(columns of generators)?
struct HullQuery {
  Vec query_point;
  Mat generators;  // one generator per column
  double lp_tol = 1e-9;
};

/// Decides hull membership by LP feasibility: exists lambda >= 0 with
/// sum(lambda) = 1 and generators * lambda = query_point. The workhorse is a
/// phase-1 simplex with Bland's rule; queries whose optimal residual lands
/// near the lp_tol threshold are re-solved with exact rational arithmetic.
bool conv_membership(const HullQuery& query);

/// Convenience overload with the default tolerance.
bool conv_membership(const Vec& point, const Mat& generators,
                     double lp_tol = 1e-9);

/// Certified two-sided bounds on dist(point, Conv(generators)), from
/// Frank-Wolfe iterations on min ||G lambda - point||^2 over the simplex.
/// upper comes from the best feasible combination, lower from the duality
/// gap; upper - lower shrinks with iterations.
struct HullDistanceBounds {
  double lower = 0.0;
  double upper = 0.0;
};
HullDistanceBounds distance_to_hull(const Vec& point, const Mat& generators,
                                    int max_iters = 20000, double gap_tol = 1e-14);

/// Test-oracle-grade brute force: Caratheodory enumeration over all
/// generator subsets of size <= n+1, solving each barycentric system
/// exactly-ish. Exponential; intended for cross-checking conv_membership
/// on tiny instances only.
bool hull_membership_caratheodory(const Vec& point, const Mat& generators,
                                  double tol = 1e-9);

}  // namespace ctb
