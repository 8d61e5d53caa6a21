#include "ctb/lp.hpp"

#include <gmpxx.h>

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <vector>

namespace ctb {

namespace {

constexpr double kPivotTol = 1e-12;

// Phase-1 simplex on A*lambda = b, lambda >= 0, minimizing the sum of
// artificial variables. Bland's rule throughout. Returns the optimal
// objective (the L1 residual) and the primal solution.
struct Phase1Result {
  double residual_l1 = 0.0;
  Vec lambda;
};

Phase1Result phase1_simplex(const Mat& a_in, const Vec& b_in) {
  const Index d = a_in.rows();
  const Index m = a_in.cols();
  Mat a = a_in;
  Vec b = b_in;
  for (Index i = 0; i < d; ++i) {
    if (b[i] < 0.0) {
      a.row(i) = -a.row(i);
      b[i] = -b[i];
    }
  }
  // Tableau over columns [lambda | artificials], artificials basic.
  const Index cols = m + d;
  Mat t(d, cols + 1);
  t.leftCols(m) = a;
  t.block(0, m, d, d) = Mat::Identity(d, d);
  t.col(cols) = b;
  // Phase-1 objective row: reduced costs of lambda columns are -sum of rows.
  Vec obj = Vec::Zero(cols + 1);
  for (Index j = 0; j < m; ++j) obj[j] = -a.col(j).sum();
  obj[cols] = -b.sum();

  std::vector<Index> basis(d);
  for (Index i = 0; i < d; ++i) basis[i] = m + i;

  for (;;) {
    // Bland: entering = smallest-index column with negative reduced cost.
    Index enter = -1;
    for (Index j = 0; j < cols; ++j) {
      if (obj[j] < -kPivotTol) {
        enter = j;
        break;
      }
    }
    if (enter < 0) break;
    // Ratio test; Bland tie-break on smallest basis index.
    Index leave = -1;
    double best_ratio = 0.0;
    for (Index i = 0; i < d; ++i) {
      const double aij = t(i, enter);
      if (aij > kPivotTol) {
        const double ratio = t(i, cols) / aij;
        if (leave < 0 || ratio < best_ratio - kPivotTol ||
            (ratio < best_ratio + kPivotTol && basis[i] < basis[leave])) {
          leave = i;
          best_ratio = ratio;
        }
      }
    }
    if (leave < 0) break;  // unbounded cannot happen in phase 1
    const double pivot = t(leave, enter);
    t.row(leave) /= pivot;
    for (Index i = 0; i < d; ++i) {
      if (i != leave && t(i, enter) != 0.0) {
        t.row(i) -= t(i, enter) * t.row(leave);
      }
    }
    obj -= obj[enter] * t.row(leave).transpose();
    basis[leave] = enter;
  }

  Phase1Result res;
  res.lambda = Vec::Zero(m);
  double residual = 0.0;
  for (Index i = 0; i < d; ++i) {
    const double v = t(i, cols);
    if (basis[i] < m) {
      res.lambda[basis[i]] = v;
    } else {
      residual += std::max(v, 0.0);
    }
  }
  res.residual_l1 = residual;
  return res;
}

// Exact rational simplex (Bland's rule), min c^T v subject to E v = f,
// v >= 0. Two-phase. Returns the optimal objective; throws on infeasible.
using Rat = mpq_class;
using RatMat = std::vector<std::vector<Rat>>;

struct RationalLp {
  RatMat e;            // rows x cols
  std::vector<Rat> f;  // rhs
  std::vector<Rat> c;  // objective
};

Rat rational_simplex_min(RationalLp lp) {
  const std::size_t rows = lp.e.size();
  const std::size_t n_orig = lp.c.size();
  for (std::size_t i = 0; i < rows; ++i) {
    if (lp.f[i] < 0) {
      for (auto& v : lp.e[i]) v = -v;
      lp.f[i] = -lp.f[i];
    }
  }
  const std::size_t cols = n_orig + rows;  // + artificials
  RatMat t(rows, std::vector<Rat>(cols + 1, 0));
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < n_orig; ++j) t[i][j] = lp.e[i][j];
    t[i][n_orig + i] = 1;
    t[i][cols] = lp.f[i];
  }
  std::vector<std::size_t> basis(rows);
  for (std::size_t i = 0; i < rows; ++i) basis[i] = n_orig + i;

  auto do_pivot = [&](std::size_t leave, std::size_t enter) {
    const Rat pivot = t[leave][enter];
    for (std::size_t j = 0; j <= cols; ++j) t[leave][j] /= pivot;
    for (std::size_t i = 0; i < rows; ++i) {
      if (i != leave && t[i][enter] != 0) {
        const Rat factor = t[i][enter];
        for (std::size_t j = 0; j <= cols; ++j) {
          t[i][j] -= factor * t[leave][j];
        }
      }
    }
    basis[leave] = enter;
  };

  // enter_limit restricts entering candidates (phase 2 excludes artificials).
  auto run_phase = [&](const std::vector<Rat>& cost,
                       std::size_t enter_limit) -> Rat {
    std::vector<Rat> obj(cols + 1, 0);
    for (std::size_t j = 0; j < cols; ++j) obj[j] = cost[j];
    for (std::size_t i = 0; i < rows; ++i) {
      if (cost[basis[i]] != 0) {
        const Rat cb = cost[basis[i]];
        for (std::size_t j = 0; j <= cols; ++j) obj[j] -= cb * t[i][j];
      }
    }
    for (;;) {
      std::size_t enter = cols;
      for (std::size_t j = 0; j < enter_limit; ++j) {
        if (obj[j] < 0) {
          enter = j;
          break;
        }
      }
      if (enter == cols) break;
      std::size_t leave = rows;
      Rat best_ratio = 0;
      for (std::size_t i = 0; i < rows; ++i) {
        if (t[i][enter] > 0) {
          const Rat ratio = t[i][cols] / t[i][enter];
          if (leave == rows || ratio < best_ratio ||
              (ratio == best_ratio && basis[i] < basis[leave])) {
            leave = i;
            best_ratio = ratio;
          }
        }
      }
      if (leave == rows) {
        throw std::runtime_error("rational LP unbounded");
      }
      do_pivot(leave, enter);
      const Rat of = obj[enter];
      for (std::size_t j = 0; j <= cols; ++j) obj[j] -= of * t[leave][j];
    }
    return -obj[cols];
  };

  std::vector<Rat> phase1_cost(cols, 0);
  for (std::size_t j = n_orig; j < cols; ++j) phase1_cost[j] = 1;
  const Rat infeas = run_phase(phase1_cost, cols);
  if (infeas != 0) {
    throw std::runtime_error("rational LP infeasible");
  }
  // Drive any degenerate basic artificials out before phase 2; a row with
  // no original-column pivot available is redundant and can stay (that
  // artificial remains zero since phase 2 never lets artificials enter).
  for (std::size_t i = 0; i < rows; ++i) {
    if (basis[i] >= n_orig) {
      for (std::size_t j = 0; j < n_orig; ++j) {
        if (t[i][j] != 0) {
          do_pivot(i, j);
          break;
        }
      }
    }
  }
  std::vector<Rat> phase2_cost(cols, 0);
  for (std::size_t j = 0; j < n_orig; ++j) phase2_cost[j] = lp.c[j];
  return run_phase(phase2_cost, n_orig);
}

// Exact min-infinity-norm residual of the hull query:
// min t s.t. sum(lambda) = 1, |G lambda - x|_i <= t, lambda >= 0, t >= 0.
Rat exact_hull_residual(const Vec& point, const Mat& generators) {
  const Index n = point.size();
  const Index m = generators.cols();
  const std::size_t rows = 1 + 2 * static_cast<std::size_t>(n);
  const std::size_t nvars = static_cast<std::size_t>(m) + 1 +
                            2 * static_cast<std::size_t>(n);  // lambda, t, s
  RationalLp lp;
  lp.e.assign(rows, std::vector<Rat>(nvars, 0));
  lp.f.assign(rows, 0);
  lp.c.assign(nvars, 0);
  const std::size_t t_col = static_cast<std::size_t>(m);
  lp.c[t_col] = 1;
  for (Index j = 0; j < m; ++j) lp.e[0][static_cast<std::size_t>(j)] = 1;
  lp.f[0] = 1;
  for (Index i = 0; i < n; ++i) {
    const std::size_t r_up = 1 + static_cast<std::size_t>(i);
    const std::size_t r_dn = 1 + static_cast<std::size_t>(n + i);
    for (Index j = 0; j < m; ++j) {
      const Rat gij(generators(i, j));
      lp.e[r_up][static_cast<std::size_t>(j)] = gij;
      lp.e[r_dn][static_cast<std::size_t>(j)] = -gij;
    }
    lp.e[r_up][t_col] = -1;
    lp.e[r_dn][t_col] = -1;
    lp.e[r_up][t_col + 1 + static_cast<std::size_t>(i)] = 1;
    lp.e[r_dn][t_col + 1 + static_cast<std::size_t>(n + i)] = 1;
    lp.f[r_up] = Rat(point[i]);
    lp.f[r_dn] = Rat(-point[i]);
  }
  return rational_simplex_min(std::move(lp));
}

}  // namespace

bool conv_membership(const HullQuery& query) {
  const Index n = query.query_point.size();
  const Index m = query.generators.cols();
  if (m > 0 && query.generators.rows() != n) {
    throw ValidationError("conv_membership: dimension mismatch");
  }
  if (m == 0) return false;  // empty hull
  const double tol = query.lp_tol;

  // Phase-1 feasibility on [G; 1^T] lambda = [x; 1].
  Mat a(n + 1, m);
  a.topRows(n) = query.generators;
  a.row(n).setOnes();
  Vec b(n + 1);
  b.head(n) = query.query_point;
  b[n] = 1.0;
  const Phase1Result p1 = phase1_simplex(a, b);

  // Feasible-side certificate: normalize and measure the true residual.
  const double lam_sum = p1.lambda.sum();
  if (lam_sum > 0.5) {
    const Vec resid =
        query.generators * (p1.lambda / lam_sum) - query.query_point;
    if (resid.lpNorm<Eigen::Infinity>() <= 0.5 * tol) return true;
  }
  // Infeasible-side certificate: the spatial L-inf optimum is at least
  // residual_l1 / n, so a comfortably large L1 residual decides directly.
  if (p1.residual_l1 > 2.0 * static_cast<double>(n) * tol) return false;

  // Near the threshold: exact rational re-solve of the L-inf program.
  const Rat exact = exact_hull_residual(query.query_point, query.generators);
  return exact <= Rat(tol);
}

bool conv_membership(const Vec& point, const Mat& generators, double lp_tol) {
  return conv_membership(HullQuery{point, generators, lp_tol});
}

HullDistanceBounds distance_to_hull(const Vec& point, const Mat& generators,
                                    int max_iters, double gap_tol) {
  const Index m = generators.cols();
  if (m == 0) {
    throw ValidationError("distance_to_hull: no generators");
  }
  // Start at the nearest single generator.
  Index best = 0;
  double best_d2 = (generators.col(0) - point).squaredNorm();
  for (Index j = 1; j < m; ++j) {
    const double d2 = (generators.col(j) - point).squaredNorm();
    if (d2 < best_d2) {
      best_d2 = d2;
      best = j;
    }
  }
  Vec lambda = Vec::Zero(m);
  lambda[best] = 1.0;
  Vec y = generators.col(best) - point;  // G lambda - x, kept incrementally
  double gap = std::numeric_limits<double>::infinity();
  for (int it = 0; it < max_iters; ++it) {
    const Vec grad = generators.transpose() * y;
    Index s = 0;
    double gmin = grad[0];
    for (Index j = 1; j < m; ++j) {
      if (grad[j] < gmin) {
        gmin = grad[j];
        s = j;
      }
    }
    gap = grad.dot(lambda) - gmin;
    if (gap <= gap_tol) break;
    const Vec w = generators.col(s) - point - y;  // g_s - G lambda
    const double w2 = w.squaredNorm();
    if (w2 <= 0.0) break;
    const double step = std::clamp(-y.dot(w) / w2, 0.0, 1.0);
    if (step <= 0.0) break;
    lambda *= (1.0 - step);
    lambda[s] += step;
    y += step * w;
  }
  HullDistanceBounds out;
  const double f = 0.5 * y.squaredNorm();
  out.upper = std::sqrt(2.0 * f);
  out.lower = std::sqrt(2.0 * std::max(0.0, f - gap));
  return out;
}

bool hull_membership_caratheodory(const Vec& point, const Mat& generators,
                                  double tol) {
  const Index n = point.size();
  const Index m = generators.cols();
  if (m == 0) return false;
  const Index k_max = std::min<Index>(m, n + 1);
  std::vector<Index> subset;
  // Enumerate subsets of each size up to n+1 and solve the barycentric
  // system [G_sub; 1] mu = [x; 1] with a rank-revealing decomposition.
  std::function<bool(Index, Index)> rec = [&](Index start,
                                              Index remaining) -> bool {
    if (remaining == 0) {
      const Index k = static_cast<Index>(subset.size());
      Mat sys(n + 1, k);
      for (Index j = 0; j < k; ++j) {
        sys.col(j).head(n) = generators.col(subset[static_cast<std::size_t>(j)]);
        sys(n, j) = 1.0;
      }
      Vec rhs(n + 1);
      rhs.head(n) = point;
      rhs[n] = 1.0;
      Vec mu = sys.fullPivHouseholderQr().solve(rhs);
      if ((sys * mu - rhs).lpNorm<Eigen::Infinity>() > tol) return false;
      return mu.minCoeff() >= -tol;
    }
    for (Index j = start; j + remaining <= m; ++j) {
      subset.push_back(j);
      if (rec(j + 1, remaining - 1)) {
        subset.pop_back();
        return true;
      }
      subset.pop_back();
    }
    return false;
  };
  for (Index k = 1; k <= k_max; ++k) {
    if (rec(0, k)) return true;
  }
  return false;
}

}  // namespace ctb
