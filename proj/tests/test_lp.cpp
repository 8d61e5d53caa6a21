#include <doctest.h>

#include <cmath>

#include "ctb/lp.hpp"
#include "ctb/rng.hpp"

using namespace ctb;

TEST_CASE("hull membership trivials") {
  Mat g(2, 3);
  g << 1, 0, -1, 0, 1, -1;  // (1,0), (0,1), (-1,-1)
  CHECK(conv_membership(Vec(g.col(0)), g));  // a generator itself
  CHECK(conv_membership(Vec(Vec::Zero(2)), g));  // centroid of the three
  Mat right(2, 3);
  right << 1, 2, 1.5, 0, 1, -2;  // all first coordinates >= 1
  CHECK_FALSE(conv_membership(Vec(Vec::Zero(2)), right));
}

TEST_CASE("hull membership rejects dimension mismatch and empty hulls") {
  Mat g(3, 2);
  g.setOnes();
  CHECK_THROWS_AS(conv_membership(Vec(Vec::Zero(2)), g), ValidationError);
  CHECK_FALSE(conv_membership(Vec(Vec::Zero(2)), Mat(2, 0)));
}

TEST_CASE("degenerate generators are handled by feasibility alone") {
  // Affinely dependent points on a segment.
  Mat g(2, 3);
  g << 0, 1, 2, 0, 1, 2;
  CHECK(conv_membership(Vec(Vec::Constant(2, 1.5)), g));
  Vec off(2);
  off << 1.5, 1.6;
  CHECK_FALSE(conv_membership(off, g));
  // Fewer generators than n + 1.
  Mat single(3, 1);
  single << 1, 2, 3;
  CHECK(conv_membership(Vec(single.col(0)), single));
  CHECK_FALSE(conv_membership(Vec(Vec::Zero(3)), single));
}

TEST_CASE("LP verdict matches the Caratheodory brute-force oracle") {
  RngStream stream(314159);
  int checked = 0;
  for (int trial = 0; trial < 300; ++trial) {
    const int n = 1 + static_cast<int>(stream.next_below(3));
    const int m = 1 + static_cast<int>(stream.next_below(8));
    Mat g(n, m);
    for (Index j = 0; j < m; ++j) g.col(j) = stream.next_gaussian_vec(n);
    const Vec query = stream.next_gaussian_vec(n);
    const bool lp = conv_membership(query, g);
    const bool brute = hull_membership_caratheodory(query, g);
    CHECK(lp == brute);
    ++checked;
  }
  CHECK(checked == 300);
}

TEST_CASE("hull monotonicity: adding generators never removes members") {
  RngStream stream(2718);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 2;
    const int m = 4 + static_cast<int>(stream.next_below(4));
    Mat g(n, m);
    for (Index j = 0; j < m; ++j) g.col(j) = stream.next_gaussian_vec(n);
    const Vec query = stream.next_gaussian_vec(n);
    if (!conv_membership(query, g)) continue;
    Mat extended(n, m + 1);
    extended.leftCols(m) = g;
    extended.col(m) = stream.next_gaussian_vec(n);
    CHECK(conv_membership(query, extended));
  }
}

TEST_CASE("distance bounds from Frank-Wolfe bracket the true distance") {
  // Segment from (0,0) to (2,0); query above the midpoint.
  Mat g(2, 2);
  g << 0, 2, 0, 0;
  Vec query(2);
  query << 1.0, 0.75;
  const HullDistanceBounds b = distance_to_hull(query, g);
  CHECK(b.lower <= 0.75 + 1e-9);
  CHECK(b.upper >= 0.75 - 1e-9);
  CHECK(b.upper - b.lower <= 1e-6);
  // A member point has distance ~0.
  const HullDistanceBounds inside = distance_to_hull(Vec(g.col(0)), g);
  CHECK(inside.upper <= 1e-9);
}

TEST_CASE("near-threshold queries agree with the exact rational verdict") {
  // Query just outside a segment endpoint by less than lp_tol, then just
  // beyond it: verdicts must flip exactly at the tolerance.
  Mat g(1, 2);
  g << 0, 1;
  Vec inside_tol(1), outside_tol(1);
  inside_tol << 1.0 + 0.4e-9;
  outside_tol << 1.0 + 3e-8;
  CHECK(conv_membership(inside_tol, g, 1e-9));
  CHECK_FALSE(conv_membership(outside_tol, g, 1e-9));
  // Queries inside the ambiguous band go through the rational re-solve.
  Vec band_in(1), band_out(1);
  band_in << 1.0 + 0.9e-9;
  band_out << 1.0 + 1.5e-9;
  CHECK(conv_membership(band_in, g, 1e-9));
  CHECK_FALSE(conv_membership(band_out, g, 1e-9));
}
