#include <gtest/gtest.h>

#include <algorithm>
#include <queue>
#include <random>

#include "hypstab/errors.hpp"
#include "hypstab/geodesic_recognition.hpp"
#include "support.hpp"

using namespace hypstab;

namespace {

const Ball& surface_ball() {
  static const Ball b = build_ball(GroupModel::surface_group(2), 5);
  return b;
}

// Components of the threshold graph by plain BFS over all pairs.
std::vector<std::vector<VertexId>> threshold_components(const Ball& b, const std::vector<VertexId>& s, int r) {
  std::vector<std::vector<int>> d;
  for (VertexId v : s) {
    const auto row = b.distances_from(v);
    std::vector<int> out;
    for (VertexId u : s) out.push_back((*row)[u]);
    d.push_back(out);
  }
  std::vector<int> comp(s.size(), -1);
  std::vector<std::vector<VertexId>> out;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (comp[i] >= 0) continue;
    std::queue<std::size_t> q;
    q.push(i);
    comp[i] = static_cast<int>(out.size());
    out.emplace_back();
    while (!q.empty()) {
      const auto x = q.front();
      q.pop();
      out.back().push_back(s[x]);
      for (std::size_t y = 0; y < s.size(); ++y) {
        if (comp[y] < 0 && d[x][y] <= r) {
          comp[y] = comp[i];
          q.push(y);
        }
      }
    }
    std::sort(out.back().begin(), out.back().end());
  }
  std::sort(out.begin(), out.end());
  return out;
}

Ball free_axis_tube(int n) {
  const GroupModel f = GroupModel::free_group(2);
  return build_tube(f, f.parse_word("a b A B").power(static_cast<std::size_t>(n)), 3);
}

}  // namespace

TEST(CornerProducts, CollinearAndBacktracking) {
  const Ball& b = surface_ball();
  const auto& m = b.model();
  const auto line = b.some_geodesic(b.origin(), b.at(m.parse_word("a1 b1 a1 b1")));
  const auto pw = PiecewiseGeodesic::through(b, {line.vertices[0], line.vertices[1], line.vertices[3], line.vertices[4]});
  pw.validate(b);
  for (HalfInt c : corner_products(pw, b)) EXPECT_EQ(c, HalfInt(0));

  const VertexId x = b.at(m.parse_word("a1 a2 b2"));
  const auto back = PiecewiseGeodesic::through(b, {b.origin(), x, b.origin()});
  EXPECT_EQ(corner_products(back, b), std::vector<HalfInt>{HalfInt(3)});
}

TEST(CornerProducts, MatchFreshDistances) {
  const Ball& b = surface_ball();
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<VertexId> pick(0, 400);
  for (int trial = 0; trial < 30; ++trial) {
    const auto pw = PiecewiseGeodesic::through(b, {pick(rng), pick(rng), pick(rng), pick(rng)});
    const auto c = corner_products(pw, b);
    ASSERT_EQ(c.size(), 2u);
    for (std::size_t i = 1; i <= 2; ++i) {
      const auto dx = b.distances_from(pw.breakpoints[i]);
      const int a = (*dx)[pw.breakpoints[i - 1]];
      const int z = (*dx)[pw.breakpoints[i + 1]];
      const int az = b.distance(pw.breakpoints[i - 1], pw.breakpoints[i + 1]);
      EXPECT_EQ(c[i - 1], HalfInt::from_twice(a + z - az));
    }
  }
}

TEST(PiecewiseGeodesic, ValidateRejects) {
  const Ball& b = surface_ball();
  PiecewiseGeodesic empty;
  empty.breakpoints = {b.origin()};
  EXPECT_THROW(empty.validate(b), InvalidInput);
  auto pw = PiecewiseGeodesic::through(b, {b.origin(), b.at(b.model().parse_word("a1 b1"))});
  pw.segments[0].vertices.insert(pw.segments[0].vertices.begin() + 1,
                                 {b.at(b.model().parse_word("a1")), b.origin()});
  EXPECT_THROW(pw.validate(b), InvalidInput);
}

TEST(BrokenGeodesic, SingleGeodesic) {
  const Ball& b = surface_ball();
  const auto pw = PiecewiseGeodesic::through(b, {b.origin(), b.at(b.model().parse_word("a1 b1 a2"))});
  const auto v = check_broken_geodesic(pw, HalfInt(0), HalfInt(8), b);
  EXPECT_EQ(v.hausdorff, 0);
  EXPECT_TRUE(v.pass);
}

TEST(BrokenGeodesic, FreeZeroCornersAreGeodesic) {
  const GroupModel f = GroupModel::free_group(2);
  const Word w = f.parse_word("a a b a b b a B a a");
  const Ball tube = build_tube(f, w, 2);
  const auto pw = PiecewiseGeodesic::through(tube, {tube.seed(0), tube.seed(3), tube.seed(6), tube.seed(10)});
  const auto v = check_broken_geodesic(pw, HalfInt(0), HalfInt(0), tube);
  EXPECT_TRUE(v.hypotheses());
  EXPECT_EQ(v.max_corner, HalfInt(0));
  EXPECT_EQ(v.hausdorff, 0);
  EXPECT_TRUE(v.pass);
}

TEST(BrokenGeodesic, FreeScan) {
  BrokenScanOptions opt;
  opt.max_backtrack = 3;
  opt.instances = 200;
  const auto rep = broken_geodesic_scan(GroupModel::free_group(2), HalfInt(0), opt);
  EXPECT_EQ(rep.instances, 200u);
  EXPECT_EQ(rep.failures, 0u);
  EXPECT_LE(HalfInt(rep.max_hausdorff), rep.max_l);
}

TEST(BrokenGeodesic, SurfaceScanSmall) {
  BrokenScanOptions opt;
  opt.segments = 4;
  opt.instances = 3;
  const auto rep = broken_geodesic_scan(GroupModel::surface_group(2), HalfInt(8), opt);
  EXPECT_EQ(rep.instances, 3u);
  EXPECT_EQ(rep.failures, 0u);
  EXPECT_LE(rep.max_slack_used, HalfInt(0));
}

TEST(RConnected, Examples) {
  const Ball& b = surface_ball();
  const auto line = b.some_geodesic(b.origin(), b.at(b.model().parse_word("a1 b1 a1 b1 a2")));
  EXPECT_EQ(r_connected_components(line.vertices, 1, b).size(), 1u);
  const std::vector<VertexId> two{line.vertices[0], line.vertices[5]};
  EXPECT_EQ(r_connected_components(two, 4, b).size(), 2u);
  EXPECT_EQ(r_connected_components(two, 5.5, b).size(), 1u);
  EXPECT_TRUE(r_connected_components({}, 3, b).empty());
}

TEST(RConnected, MatchesThresholdGraph) {
  const Ball& b = surface_ball();
  std::mt19937_64 rng(12);
  std::uniform_int_distribution<VertexId> pick(0, static_cast<VertexId>(b.size() - 1));
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<VertexId> s;
    for (int i = 0; i < 25; ++i) s.push_back(pick(rng));
    std::sort(s.begin(), s.end());
    s.erase(std::unique(s.begin(), s.end()), s.end());
    for (int r : {1, 2, 3, 5}) EXPECT_EQ(r_connected_components(s, r, b), threshold_components(b, s, r));
  }
}

TEST(Reconstruct, GeodesicItself) {
  const Ball tube = free_axis_tube(20);
  auto data = axis_coarse_data(tube, 0, 25, 1);
  data.h = 1;
  ASSERT_EQ(data.s.size(), tube.num_seeds());
  const auto res = reconstruct(data, HalfInt(0), HalfInt(0), tube);
  EXPECT_GE(res.chain.size(), 3u);
  EXPECT_EQ(res.hausdorff_to_s, HalfInt(0));
  EXPECT_TRUE(res.pass());
  for (VertexId v : res.chain) EXPECT_TRUE(std::count(data.s.begin(), data.s.end(), v));
}

TEST(Reconstruct, FreeAxisNeighborhood) {
  const Ball tube = free_axis_tube(20);
  const auto data = axis_coarse_data(tube, 1, 25, 1, true);
  const auto res = reconstruct(data, HalfInt(0), HalfInt(0), tube);
  EXPECT_LE(res.hausdorff_to_s, HalfInt(3));
  EXPECT_GE(res.endpoint_products.first, res.product_bound);
  EXPECT_GE(res.endpoint_products.second, res.product_bound);
  EXPECT_TRUE(res.pass());
}

TEST(Reconstruct, SurfaceNoisyAxis) {
  const GroupModel s = GroupModel::surface_group(2);
  const Ball tube = build_tube(s, s.parse_word("a1 b1").power(150), 3);
  for (std::uint64_t seed : {1u, 2u}) {
    const auto data = axis_coarse_data(tube, 1, 153, seed);
    const auto res = reconstruct(data, HalfInt(8), HalfInt(4), tube);
    EXPECT_TRUE(res.pass());
    EXPECT_LE(res.hausdorff_to_s, HalfInt(3 + 48));
    EXPECT_LE(2 * HalfInt(res.estimates.max_step), HalfInt(153 + 4));
  }
}

TEST(Reconstruct, Errors) {
  const Ball tube = free_axis_tube(20);
  auto data = axis_coarse_data(tube, 1, 24, 1);
  try {
    reconstruct(data, HalfInt(0), HalfInt(0), tube);
    FAIL();
  } catch (const HypothesisError& e) {
    EXPECT_EQ(e.step(), "precondition");
  }

  data = axis_coarse_data(tube, 0, 25, 1);
  data.h = 1;
  auto gap = data;
  gap.s.clear();
  for (std::size_t i = 0; i < tube.num_seeds(); ++i)
    if (i < 30 || i > 40) gap.s.push_back(tube.seed(i));
  try {
    reconstruct(gap, HalfInt(0), HalfInt(0), tube);
    FAIL();
  } catch (const HypothesisError& e) {
    EXPECT_EQ(e.step(), "connectivity");
  }

  const Ball short_tube = free_axis_tube(4);
  auto small = axis_coarse_data(short_tube, 1, 25, 1);
  try {
    reconstruct(small, HalfInt(0), HalfInt(0), short_tube);
    FAIL();
  } catch (const HypothesisError& e) {
    EXPECT_EQ(e.step(), "chain");
  }

  auto far = data;
  const VertexId off = tube.at(tube.word(tube.seed(40)) * tube.model().parse_word("A A"));
  far.s.push_back(off);
  far.window_of.emplace(off, 0);
  try {
    reconstruct(far, HalfInt(0), HalfInt(0), tube);
    FAIL();
  } catch (const HypothesisError& e) {
    EXPECT_EQ(e.step(), "local-fit");
  }
}

TEST(BrokenGeodesic, ThickerTubeAgrees) {
  BrokenScanOptions opt;
  opt.segments = 6;
  opt.min_length = 20;
  opt.instances = 10;
  opt.seed = 4;
  const auto thin = broken_geodesic_scan(GroupModel::surface_group(2), HalfInt(1), opt);
  opt.thickness = 4;
  const auto thick = broken_geodesic_scan(GroupModel::surface_group(2), HalfInt(1), opt);
  EXPECT_EQ(thin.rejected, thick.rejected);
  EXPECT_EQ(thin.instances, thick.instances);
  EXPECT_EQ(thin.max_hausdorff, thick.max_hausdorff);
  EXPECT_EQ(thin.max_l, thick.max_l);
}
