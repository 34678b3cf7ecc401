#include <gtest/gtest.h>

#include <cmath>

#include "hypstab/boundary.hpp"
#include "hypstab/errors.hpp"

using namespace hypstab;

namespace {

const GroupModel& free2() {
  static const GroupModel m = GroupModel::free_group(2);
  return m;
}
const Ball& free_ball() {
  static const Ball b = build_ball(free2(), 8);
  return b;
}

}  // namespace

TEST(BoundaryPoint, Truncate) {
  const auto p = BoundaryPoint::parse(free2(), "|a");
  EXPECT_EQ(p.truncate(3), free2().parse_word("a a a"));
  EXPECT_EQ(p.truncate(0), Word{});
  const auto q = BoundaryPoint::parse(free2(), "a|b A");
  EXPECT_EQ(q.truncate(4), free2().parse_word("a b A b"));
  EXPECT_EQ(q.str(free2()), "a|b A");
}

TEST(BoundaryPoint, RejectsBadLiterals) {
  EXPECT_THROW(BoundaryPoint::parse(free2(), "a"), InvalidInput);
  EXPECT_THROW(BoundaryPoint::parse(free2(), "a|"), InvalidInput);
  EXPECT_THROW(BoundaryPoint::parse(free2(), "|a A"), InvalidInput);
  EXPECT_THROW(BoundaryPoint::parse(free2(), "|a b A"), InvalidInput);
  EXPECT_THROW(BoundaryPoint::parse(free2(), "A|a"), InvalidInput);
  const GroupModel s = GroupModel::surface_group(2);
  EXPECT_THROW(BoundaryPoint::parse(s, "|a1 b1 A1 B1 a2 b2 A2 B2"), InvalidInput);
}

TEST(BoundaryPoint, SurfaceAxisRayIsGeodesic) {
  const GroupModel s = GroupModel::surface_group(2);
  const Ball b = build_ball(s, 6);
  const auto p = BoundaryPoint::parse(s, "|a1 b1 A1 B1");
  EXPECT_NO_THROW(p.verify(b, 6));
  const auto v = b.at(p.truncate(6));
  EXPECT_EQ(b.dist_origin(v), 6);
  EXPECT_NO_THROW(p.verify(s, 16));
  // Five letters of the relator shorten.
  const auto bad = BoundaryPoint(s, s.parse_word("a1 b1 A1 B1"), s.parse_word("a2 a2"));
  EXPECT_THROW(bad.verify(b, 6), InvalidInput);
}

TEST(GromovProductInfinity, FreeExamples) {
  const Ball& b = free_ball();
  const auto a_inf = BoundaryPoint::parse(free2(), "|a");
  const auto ab_inf = BoundaryPoint::parse(free2(), "a|b");
  const auto pr = gromov_product_infinity(b, b.origin(), a_inf, ab_inf, 6, HalfInt(0));
  EXPECT_EQ(pr.lo, HalfInt(1));
  EXPECT_EQ(pr.hi, HalfInt(1));
  EXPECT_FALSE(pr.not_distinct);
  const auto same = gromov_product_infinity(b, b.origin(), a_inf, a_inf, 6, HalfInt(0));
  EXPECT_TRUE(same.not_distinct);
  EXPECT_EQ(same.hi, HalfInt(6));
}

// Stabilized product at e equals the longest common prefix of the two
// infinite words; lower bounds never decrease with depth.
TEST(GromovProductInfinity, FreeCommonPrefixOracle) {
  const Ball& b = free_ball();
  std::mt19937_64 rng(17);
  int compared = 0;
  for (int trial = 0; trial < 300; ++trial) {
    const auto x = random_boundary_point(b, rng, 3, 3, 8);
    const auto y = random_boundary_point(b, rng, 3, 3, 8);
    const Word wx = x.truncate(40), wy = y.truncate(40);
    std::size_t lcp = 0;
    while (lcp < 40 && wx[lcp] == wy[lcp]) ++lcp;
    if (lcp >= 6) continue;
    HalfInt previous(0);
    for (int depth = 1; depth <= 6; ++depth) {
      const auto pr = gromov_product_infinity(b, b.origin(), x, y, depth, HalfInt(0));
      EXPECT_GE(pr.lo, previous);
      previous = pr.lo;
      if (depth == 6) {
        EXPECT_EQ(pr.lo, HalfInt(static_cast<std::int64_t>(lcp)));
        EXPECT_EQ(pr.hi, pr.lo);
      }
    }
    ++compared;
  }
  EXPECT_GT(compared, 100);
}

TEST(GromovProductInfinity, SurfaceAxisRays) {
  const GroupModel s = GroupModel::surface_group(2);
  const Ball b = build_ball(s, 6);
  const auto x = BoundaryPoint::parse(s, "|a1 b1");
  const auto y = BoundaryPoint::parse(s, "|a2 b2");
  const HalfInt nu(4);
  const auto pr = gromov_product_infinity(b, b.origin(), x, y, 3, nu);
  EXPECT_FALSE(pr.not_distinct);
  EXPECT_LE(pr.lo, pr.max_truncation_product);
  EXPECT_EQ(pr.hi, pr.max_truncation_product);
  EXPECT_LE(pr.hi - pr.lo, 2 * nu);
  EXPECT_THROW(gromov_product_infinity(b, b.origin(), x, y, 5, nu), ContainmentError);
}

TEST(VisualDistance, Examples) {
  const VisualMetricParams params;
  ProductInterval one;
  one.lo = one.hi = HalfInt(1);
  EXPECT_DOUBLE_EQ(visual_distance(params, one).lo, 0.5);
  EXPECT_DOUBLE_EQ(visual_distance(params, one).hi, 0.5);
  EXPECT_DOUBLE_EQ(visual_distance(params, ProductInterval{}).mid(), 1.0);
  ProductInterval wide;
  wide.lo = HalfInt(3);
  wide.hi = HalfInt(3) + 2 * HalfInt(4);
  const auto d = visual_distance(params, wide);
  EXPECT_DOUBLE_EQ(d.lo, std::pow(2.0, -11.0));
  EXPECT_DOUBLE_EQ(d.hi, std::pow(2.0, -3.0));
  EXPECT_LE(d.lo, d.hi);
}

TEST(VisualMetricParams, Validation) {
  VisualMetricParams p;
  EXPECT_NO_THROW(p.validate());
  p.lambda = 1.0;
  EXPECT_THROW(p.validate(), InvalidInput);
  p = {};
  p.k1 = 2.0;
  EXPECT_THROW(p.validate(), InvalidInput);
  p = {};
  p.depth = 3;
  EXPECT_THROW(p.validate(), InvalidInput);
}

TEST(Minsep, FreeTriple) {
  const Ball& b = free_ball();
  const auto a = BoundaryPoint::parse(free2(), "|a");
  const auto bb = BoundaryPoint::parse(free2(), "|b");
  const auto ab = BoundaryPoint::parse(free2(), "|a b");
  const VisualMetricParams params;
  EXPECT_DOUBLE_EQ(minsep(b, Triple{a, bb, ab}, params, HalfInt(0)).value, 0.5);
  EXPECT_DOUBLE_EQ(minsep(b, Triple{ab, a, bb}, params, HalfInt(0)).value, 0.5);
  EXPECT_DOUBLE_EQ(minsep(b, Triple{a, bb, ab}, params, HalfInt(0)).uncertainty, 0.0);
  EXPECT_THROW(minsep(b, Triple{a, bb, a}, params, HalfInt(0)), DomainError);
}

TEST(GeodesicWord, SurfaceAgreesWithBall) {
  const GroupModel s = GroupModel::surface_group(2);
  const Ball b = build_ball(s, 5);
  std::mt19937_64 rng(2);
  std::uniform_int_distribution<int> letter(0, 7);
  for (int trial = 0; trial < 200; ++trial) {
    Word w;
    while (w.size() < 5) {
      const Letter x = letter_from_rank(letter(rng));
      if (!w.empty() && w.back() == inverse(x)) continue;
      w.push_back(x);
    }
    EXPECT_EQ(is_geodesic_word(s, w), b.dist_origin(b.at(w)) == 5) << s.format(w);
  }
}
