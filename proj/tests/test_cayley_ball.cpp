#include <gtest/gtest.h>

#include <functional>
#include <set>

#include "hypstab/cayley_ball.hpp"
#include "hypstab/errors.hpp"
#include "support.hpp"

using namespace hypstab;

namespace {

// Sphere sizes of the genus-2 surface group from its rational growth series
// (1 + 2x + 2x^2 + 2x^3 + x^4) / (1 - 6x - 6x^2 - 6x^3 + x^4).
std::vector<std::size_t> genus_two_spheres(int n) {
  const long num[] = {1, 2, 2, 2, 1};
  std::vector<long> s;
  for (int i = 0; i <= n; ++i) {
    long v = i < 5 ? num[i] : 0;
    for (int k = 1; k <= 3; ++k)
      if (i - k >= 0) v += 6 * s[static_cast<std::size_t>(i - k)];
    if (i - 4 >= 0) v -= s[static_cast<std::size_t>(i - 4)];
    s.push_back(v);
  }
  return {s.begin(), s.end()};
}

std::size_t count_paths(const Ball& b, VertexId from, VertexId to, int steps) {
  if (steps == 0) return from == to ? 1 : 0;
  std::size_t total = 0;
  for (VertexId w : b.neighbors(from))
    if (w != kNoVertex) total += count_paths(b, w, to, steps - 1);
  return total;
}

}  // namespace

TEST(BuildBall, VertexCounts) {
  EXPECT_EQ(build_ball(GroupModel::free_group(2), 2).size(), 17u);
  EXPECT_EQ(build_ball(GroupModel::free_group(2), 0).size(), 1u);
  EXPECT_EQ(build_ball(GroupModel::surface_group(2), 0).size(), 1u);
  EXPECT_EQ(build_ball(GroupModel::free_group(3), 3).size(), 1u + 6 + 30 + 150);
}

TEST(BuildBall, SurfaceRadiusTwoBruteForce) {
  const GroupModel m = GroupModel::surface_group(2);
  std::vector<Word> classes;
  auto consider = [&](const Word& w) {
    for (const Word& c : classes)
      if (m.is_trivial(c.inverse() * w)) return;
    classes.push_back(w);
  };
  consider(Word{});
  for (int r1 = 0; r1 < 8; ++r1) {
    consider(Word{letter_from_rank(r1)});
    for (int r2 = 0; r2 < 8; ++r2) consider(Word{letter_from_rank(r1), letter_from_rank(r2)});
  }
  EXPECT_EQ(build_ball(m, 2).size(), classes.size());
}

TEST(BuildBall, SurfaceGrowthSeries) {
  const Ball b = build_ball(GroupModel::surface_group(2), 5);
  EXPECT_EQ(b.sphere_sizes(), genus_two_spheres(5));
}

TEST(BuildBall, BudgetExceeded) {
  BuildOptions opt;
  opt.max_vertices = 1000;
  try {
    build_ball(GroupModel::surface_group(2), 6, opt);
    FAIL() << "expected ResourceError";
  } catch (const ResourceError& e) {
    EXPECT_NE(std::string(e.what()).find("depth"), std::string::npos);
  }
  EXPECT_THROW(build_ball(GroupModel::free_group(2), -1), InvalidInput);
}

TEST(BuildBall, StructuralInvariants) {
  for (const char* spec : {"free:2", "surface:2"}) {
    const Ball b = build_ball(GroupModel::parse(spec), 4);
    EXPECT_EQ(b.dist_origin(b.origin()), 0);
    for (VertexId v = 0; v < b.size(); ++v) {
      const auto nb = b.neighbors(v);
      for (std::size_t k = 0; k < nb.size(); ++k) {
        const Letter x = letter_from_rank(static_cast<int>(k));
        if (nb[k] == kNoVertex) {
          EXPECT_EQ(b.dist_origin(v), 4);
          continue;
        }
        EXPECT_EQ(b.neighbor(nb[k], inverse(x)), v);
        EXPECT_LE(std::abs(b.dist_origin(v) - b.dist_origin(nb[k])), 1);
      }
      EXPECT_EQ(b.word(v).size(), static_cast<std::size_t>(b.dist_origin(v)));
      EXPECT_EQ(b.find(b.word(v)), v);
    }
  }
}

TEST(Distance, Examples) {
  const GroupModel f = GroupModel::free_group(2);
  const Ball bf = build_ball(f, 3);
  EXPECT_EQ(bf.distance(bf.origin(), bf.at(f.parse_word("a b"))), 2);
  EXPECT_EQ(bf.distance(5, 5), 0);

  const GroupModel s = GroupModel::surface_group(2);
  const Ball bs = build_ball(s, 5);
  const VertexId half = bs.at(s.relators()[0].prefix(4));
  EXPECT_EQ(bs.distance(bs.origin(), half), 4);
  EXPECT_EQ(bs.distance(bs.origin(), bs.at(s.relators()[0].prefix(5))), 3);
}

TEST(Distance, AgreesWithWordLength) {
  const GroupModel s = GroupModel::surface_group(2);
  const Ball b = build_ball(s, 6);
  std::mt19937_64 rng(3);
  // Vertices are numbered in BFS order, so the first 65 form B_2.
  std::uniform_int_distribution<VertexId> pick(0, 64);
  int compared = 0;
  for (int trial = 0; trial < 3000; ++trial) {
    const VertexId u = pick(rng), v = pick(rng);
    ASSERT_LE(b.dist_origin(u) + b.dist_origin(v), 4);
    const auto rel = b.relative(u, v);
    ASSERT_TRUE(rel.has_value());
    EXPECT_EQ(b.distance(u, v), b.dist_origin(*rel));
    ++compared;
  }
  EXPECT_GT(compared, 0);
}

TEST(Distance, TriangleInequality) {
  for (auto [spec, r] : {std::pair{"free:2", 4}, std::pair{"surface:2", 3}}) {
    const Ball b = build_ball(GroupModel::parse(spec), r);
    std::vector<std::shared_ptr<const std::vector<int>>> rows;
    for (VertexId v = 0; v < b.size(); ++v) rows.push_back(b.distances_from(v));
    for (VertexId x = 0; x < b.size(); ++x)
      for (VertexId y = 0; y < b.size(); ++y) {
        const int dxy = (*rows[x])[y];
        ASSERT_EQ(dxy, (*rows[y])[x]);
        for (VertexId z = 0; z < b.size(); ++z) ASSERT_LE(dxy, (*rows[x])[z] + (*rows[z])[y]);
      }
  }
}

TEST(Geodesics, FreeGroupUnique) {
  const Ball b = build_ball(GroupModel::free_group(2), 4);
  std::mt19937_64 rng(9);
  std::uniform_int_distribution<VertexId> pick(0, 16);
  for (int trial = 0; trial < 200; ++trial) {
    const auto g = b.geodesics_between(pick(rng), pick(rng));
    EXPECT_EQ(g.count, 1u);
    EXPECT_EQ(g.paths.size(), 1u);
  }
  const auto same = b.geodesics_between(7, 7);
  ASSERT_EQ(same.paths.size(), 1u);
  EXPECT_EQ(same.paths[0].length(), 0u);
}

TEST(Geodesics, SurfaceCountMatchesPathSearch) {
  const GroupModel s = GroupModel::surface_group(2);
  const Ball b = build_ball(s, 6);
  int multi = 0;
  for (VertexId v = 0; v < b.size() && multi < 40; v += 3) {
    if (b.dist_origin(v) != 4) continue;
    const auto g = b.geodesics_between(b.origin(), v);
    EXPECT_EQ(g.count, count_paths(b, b.origin(), v, 4));
    EXPECT_EQ(g.paths.size(), g.count);
    EXPECT_FALSE(g.truncated);
    for (const auto& p : g.paths) {
      EXPECT_EQ(p.length(), 4u);
      for (std::size_t i = 1; i < p.vertices.size(); ++i)
        EXPECT_EQ(b.distance(p.vertices[i - 1], p.vertices[i]), 1);
    }
    if (g.count >= 2) ++multi;
  }
  EXPECT_GT(multi, 0);
  const VertexId half = b.at(s.relators()[0].prefix(4));
  EXPECT_EQ(b.geodesics_between(b.origin(), half).count, 2u);
}

TEST(Geodesics, TruncationAndContainment) {
  const GroupModel s = GroupModel::surface_group(2);
  const Ball b = build_ball(s, 4);
  const VertexId half = b.at(s.relators()[0].prefix(4));
  const auto capped = b.geodesics_between(b.origin(), half, 1);
  EXPECT_TRUE(capped.truncated);
  EXPECT_EQ(capped.paths.size(), 1u);
  EXPECT_EQ(capped.count, 2u);
  const VertexId u = b.at(s.parse_word("a1 a1 a1"));
  const VertexId v = b.at(s.parse_word("b1 b1 b1"));
  EXPECT_THROW(b.geodesics_between(u, v), ContainmentError);
}

TEST(GromovProduct, Examples) {
  const GroupModel f = GroupModel::free_group(2);
  const Ball b = build_ball(f, 3);
  EXPECT_EQ(b.gromov_product(b.at(f.parse_word("a a")), b.at(f.parse_word("a b")), b.origin()), HalfInt(1));
  const VertexId a = b.at(f.parse_word("a"));
  EXPECT_EQ(b.gromov_product(a, a, b.origin()), HalfInt(1));
}

TEST(GromovProduct, FreeGroupCommonPrefix) {
  const Ball b = build_ball(GroupModel::free_group(2), 4);
  for (VertexId x = 0; x < b.size(); x += 3)
    for (VertexId y = 0; y < b.size(); y += 5) {
      const Word wx = b.word(x), wy = b.word(y);
      std::size_t lcp = 0;
      while (lcp < wx.size() && lcp < wy.size() && wx[lcp] == wy[lcp]) ++lcp;
      EXPECT_EQ(b.gromov_product(x, y, b.origin()), HalfInt(static_cast<std::int64_t>(lcp)));
    }
}

TEST(GromovProduct, SurfaceBoundsAndFormula) {
  const Ball b = build_ball(GroupModel::surface_group(2), 5);
  std::mt19937_64 rng(21);
  std::uniform_int_distribution<VertexId> pick(0, static_cast<VertexId>(b.size() - 1));
  for (int trial = 0; trial < 300; ++trial) {
    const VertexId x = pick(rng), y = pick(rng), z = pick(rng);
    const HalfInt p = b.gromov_product(x, y, z);
    const auto dz = b.distances_from(z);
    const auto dx = b.distances_from(x);
    EXPECT_EQ(p.twice(), (*dz)[x] + (*dz)[y] - (*dx)[y]);
    EXPECT_EQ(p, b.gromov_product(y, x, z));
    EXPECT_GE(p, HalfInt(0));
    EXPECT_LE(p, HalfInt(std::min((*dz)[x], (*dz)[y])));
  }
}

TEST(Tube, DistancesMatchBall) {
  const GroupModel s = GroupModel::surface_group(2);
  const Word axis = s.parse_word("a1 b1").power(12);
  const Ball tube = build_tube(s, axis, 3);
  const Ball ball = build_ball(s, 5);
  EXPECT_TRUE(tube.is_tube());
  EXPECT_EQ(tube.distance(tube.seed(0), tube.seed(axis.size())), static_cast<int>(axis.size()));
  int compared = 0;
  for (std::size_t i = 0; i <= axis.size(); i += 4)
    for (VertexId v = 0; v < tube.size(); v += 37) {
      const auto bv = ball.find(tube.word(tube.seed(i)).inverse() * tube.word(v));
      if (!bv) continue;
      EXPECT_EQ(tube.distance(tube.seed(i), v), ball.dist_origin(*bv));
      ++compared;
    }
  EXPECT_GT(compared, 100);
}

TEST(Tube, ElementsAreUnique) {
  const GroupModel s = GroupModel::surface_group(2);
  const Ball tube = build_tube(s, s.parse_word("a1 a2 b1 B2").power(3), 2);
  std::mt19937_64 rng(4);
  std::uniform_int_distribution<VertexId> pick(0, static_cast<VertexId>(tube.size() - 1));
  for (int trial = 0; trial < 2000; ++trial) {
    const VertexId u = pick(rng), v = pick(rng);
    EXPECT_EQ(u == v, s.is_trivial(tube.word(u).inverse() * tube.word(v)));
  }
}
