#include <gtest/gtest.h>

#include <algorithm>

#include "hypstab/errors.hpp"
#include "hypstab/triple_space.hpp"

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

Triple parse_triple(const GroupModel& m, const char* a, const char* b, const char* c) {
  return {BoundaryPoint::parse(m, a), BoundaryPoint::parse(m, b), BoundaryPoint::parse(m, c)};
}

// Median of three points of a tree given by reduced words.
Word tree_median(const Word& x, const Word& y, const Word& z) {
  auto lcp = [](const Word& u, const Word& v) {
    std::size_t n = 0;
    while (n < u.size() && n < v.size() && u[n] == v[n]) ++n;
    return u.prefix(n);
  };
  Word best = lcp(x, y);
  for (const Word& w : {lcp(x, z), lcp(y, z)})
    if (w.size() > best.size()) best = w;
  return best;
}

bool subset(const std::vector<VertexId>& a, const std::vector<VertexId>& b) {
  return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

}  // namespace

TEST(CoarseProjection, FreeMedianExamples) {
  const Ball& b = free_ball();
  const auto p1 = coarse_projection(b, parse_triple(free2(), "|a", "|b", "|a b"), HalfInt(1), 6);
  ASSERT_EQ(p1.vertices.size(), 1u);
  EXPECT_EQ(b.word(p1.vertices[0]), free2().parse_word("a"));
  EXPECT_FALSE(p1.truncated);
  const auto p2 = coarse_projection(b, parse_triple(free2(), "|a", "|b", "a|b"), HalfInt(1), 6);
  ASSERT_EQ(p2.vertices.size(), 1u);
  EXPECT_EQ(b.word(p2.vertices[0]), free2().parse_word("a"));
  const auto p3 = coarse_projection(b, parse_triple(free2(), "|a", "|b", "|A"), HalfInt(1), 6);
  ASSERT_EQ(p3.vertices.size(), 1u);
  EXPECT_EQ(p3.vertices[0], b.origin());
  const auto wider = coarse_projection(b, parse_triple(free2(), "|a", "|b", "a|b"), HalfInt(2), 6);
  EXPECT_TRUE(subset(p2.vertices, wider.vertices));
  EXPECT_EQ(wider.vertices.size(), 5u);
  EXPECT_TRUE(coarse_projection(b, parse_triple(free2(), "|a", "|b", "a|b"), HalfInt(0), 6).vertices.empty());
}

TEST(CoarseProjection, FreeMedianOracle) {
  const Ball& b = free_ball();
  const auto triples = sample_triples(b, 200, 3, 6, HalfInt(0));
  for (const Triple& t : triples) {
    const auto p = coarse_projection(b, t, HalfInt(1), 6);
    ASSERT_EQ(p.vertices.size(), 1u);
    EXPECT_EQ(b.word(p.vertices[0]), tree_median(t.a.truncate(6), t.b.truncate(6), t.c.truncate(6)));
  }
}

TEST(CoarseProjection, MonotoneInR) {
  const GroupModel s = GroupModel::surface_group(2);
  const Ball b = build_ball(s, 6);
  const auto triples = sample_triples(b, 6, 5, 3, HalfInt(4));
  for (const Triple& t : triples) {
    std::vector<VertexId> previous;
    for (int r = 1; r <= 4; ++r) {
      const auto p = coarse_projection(b, t, HalfInt(r), 3);
      EXPECT_TRUE(subset(previous, p.vertices));
      EXPECT_FALSE(p.vertices.empty());
      previous = p.vertices;
    }
  }
  for (const Triple& t : sample_triples(free_ball(), 50, 6, 6, HalfInt(0))) {
    EXPECT_TRUE(subset(coarse_projection(free_ball(), t, HalfInt(1), 6).vertices,
                       coarse_projection(free_ball(), t, HalfInt::from_twice(3), 6).vertices));
  }
}

TEST(CoarseProjection, MembershipAgreesWithProjection) {
  const GroupModel s = GroupModel::surface_group(2);
  const Ball b = build_ball(s, 6);
  const auto triples = sample_triples(b, 3, 8, 3, HalfInt(4));
  ProjectionEngine engine(b, 3);
  for (const Triple& t : triples) {
    const auto p = engine.project(t, HalfInt(3));
    for (VertexId v = 0; v < b.size(); v += 101) {
      EXPECT_EQ(engine.contains(t, HalfInt(3), v), std::binary_search(p.vertices.begin(), p.vertices.end(), v));
    }
  }
}

// Translating a triple by a generator translates its projection, on the
// part of the ball where both sides are visible.
TEST(CoarseProjection, FreeEquivariance) {
  const Ball& b = free_ball();
  const Letter g = 1;
  int compared = 0;
  for (const Triple& t : sample_triples(b, 100, 12, 5, HalfInt(0))) {
    auto shift = [&](const BoundaryPoint& p) { return BoundaryPoint(free2(), free_reduce(Word{g} * p.prefix()), p.period()); };
    Triple moved;
    try {
      moved = Triple{shift(t.a), shift(t.b), shift(t.c)};
    } catch (const InvalidInput&) {
      continue;
    }
    const auto p = coarse_projection(b, t, HalfInt(1), 5);
    const auto q = coarse_projection(b, moved, HalfInt(1), 5);
    ASSERT_EQ(p.vertices.size(), 1u);
    ASSERT_EQ(q.vertices.size(), 1u);
    EXPECT_EQ(free_reduce(Word{g} * b.word(p.vertices[0])), b.word(q.vertices[0]));
    ++compared;
  }
  EXPECT_GT(compared, 20);
}

TEST(CoarseProjection, Containment) {
  const GroupModel s = GroupModel::surface_group(2);
  const Ball b = build_ball(s, 4);
  const auto t = parse_triple(s, "|a1", "|b1", "|a2");
  EXPECT_NO_THROW(coarse_projection(b, t, HalfInt(2), 2));
  EXPECT_THROW(coarse_projection(b, t, HalfInt(2), 3), ContainmentError);
  EXPECT_THROW(coarse_projection(b, t, HalfInt(2), 5), ContainmentError);
  EXPECT_EQ(default_projection_depth(b), 2);
  EXPECT_EQ(default_projection_depth(free_ball()), 6);
}

TEST(ProjectionDiameter, FreeMediansAreSingletons) {
  const Ball& b = free_ball();
  const auto triples = sample_triples(b, 100, 4, 6, HalfInt(0));
  const auto rep = projection_diameter(b, triples, HalfInt(1), 6);
  EXPECT_EQ(rep.q_emp, 0);
  EXPECT_EQ(rep.empty, 0u);
  EXPECT_EQ(rep.triples, 100u);
  const Triple one = parse_triple(free2(), "|a", "|b", "a|b");
  const auto single = projection_diameter(b, std::span(&one, 1), HalfInt(2), 6);
  EXPECT_EQ(single.q_emp, 2);
}

TEST(VertexSetDiameter, SmallSets) {
  const Ball& b = free_ball();
  const VertexId e = b.origin();
  const VertexId ab = b.at(free2().parse_word("a b"));
  const VertexId ba = b.at(free2().parse_word("b a"));
  const VertexId set[] = {e, ab, ba};
  const auto d = vertex_set_diameter(b, set);
  EXPECT_TRUE(d.exact());
  EXPECT_EQ(d.upper, 4);
  EXPECT_EQ(vertex_set_diameter(b, std::span(set, 1)).upper, 0);
}

TEST(VertexPreimage, FreeRoundTrip) {
  const Ball& b = free_ball();
  const auto triples = sample_triples(b, 300, 9, 6, HalfInt(0));
  const auto pre = vertex_preimage(b, b.origin(), HalfInt(1), triples, 6);
  EXPECT_FALSE(pre.empty());
  for (std::size_t i : pre) {
    const auto p = coarse_projection(b, triples[i], HalfInt(1), 6);
    EXPECT_TRUE(std::binary_search(p.vertices.begin(), p.vertices.end(), b.origin()));
  }
  EXPECT_EQ(union_diameter(b, triples, pre, HalfInt(1), 6), 0);
  // A vertex at the edge of the ball lies on no geodesic between depth-2
  // truncations.
  const VertexId edge = b.at(free2().parse_word("a a a a a a a a"));
  EXPECT_TRUE(vertex_preimage(b, edge, HalfInt(1), sample_triples(b, 50, 9, 2, HalfInt(0)), 2).empty());
}

TEST(Ledger, Examples) {
  const auto l = build_ledger(HalfInt(1), 6, 2, 10);
  EXPECT_EQ(l.h, 7);
  EXPECT_EQ(l.r, 223);
  const auto z = build_ledger(HalfInt(0), 0, 0, 0);
  EXPECT_EQ(z.h, 1);
  EXPECT_EQ(z.r, 25);
  // Large C_V makes the second branch dominate.
  const auto big = build_ledger(HalfInt(1), 6, 2, 1000);
  EXPECT_EQ(big.r, 1000 + 28 + 11 + 1);
  const auto half = build_ledger(HalfInt::from_twice(1), 0, 0, 0);
  EXPECT_EQ(half.h, 2);
  EXPECT_EQ(half.r, 48 + 26 + 1);
  EXPECT_THROW(build_ledger(HalfInt(-1), 0, 0, 0), InvalidInput);
}
