#include "hypstab/triple_space.hpp"

#include <algorithm>
#include <limits>
#include <random>
#include <unordered_map>

#include "hypstab/errors.hpp"

namespace hypstab {

namespace {

// Largest distance from x to a geodesic in the DAG (a bottleneck path),
// given the distance lookup.
template <typename Dist>
int farthest_geodesic(const GeodesicDag& dag, Dist dist) {
  std::vector<int> best(dag.nodes.size());
  for (std::size_t i = 0; i < dag.nodes.size(); ++i) {
    int through = 0;
    if (dag.preds[i].empty()) {
      through = std::numeric_limits<int>::max();
    } else {
      for (std::uint32_t p : dag.preds[i]) through = std::max(through, best[p]);
    }
    best[i] = std::min(through, dist(dag.nodes[i]));
  }
  return best.back();
}

int threshold_of(HalfInt r) { return static_cast<int>((r - HalfInt(1)).floor()); }

}  // namespace

int default_projection_depth(const Ball& ball) {
  const int r = ball.radius();
  return std::max(0, ball.model().is_free() ? r - 2 : std::min(r - 2, r / 2));
}

ProjectionEngine::ProjectionEngine(const Ball& ball, int depth) : ball_(ball), depth_(depth) {
  if (depth < 0) throw InvalidInput("projection depth must be non-negative");
}

VertexId ProjectionEngine::truncation(const BoundaryPoint& p) {
  const auto v = ball_.find(p.truncate(static_cast<std::size_t>(depth_)));
  if (!v) {
    throw ContainmentError("truncation of " + p.str(ball_.model()) + " at depth " + std::to_string(depth_) +
                           " leaves the region");
  }
  return *v;
}

const GeodesicDag& ProjectionEngine::dag(VertexId u, VertexId v) {
  const auto key = std::make_pair(u, v);
  if (auto it = dags_.find(key); it != dags_.end()) return it->second;
  if (!ball_.geodesics_contained(u, v)) {
    throw ContainmentError("geodesics between truncations '" + ball_.model().format(ball_.word(u)) + "' and '" +
                           ball_.model().format(ball_.word(v)) + "' may leave the region; lower the depth");
  }
  const auto layers = ball_.interval(u, v);
  GeodesicDag g;
  std::unordered_map<VertexId, std::uint32_t> index;
  std::size_t prev_begin = 0, prev_end = 0;
  for (std::size_t k = 0; k < layers.size(); ++k) {
    const std::size_t begin = g.nodes.size();
    for (VertexId x : layers[k]) {
      std::vector<std::uint32_t> p;
      if (k > 0) {
        for (VertexId y : ball_.neighbors(x)) {
          if (y == kNoVertex) continue;
          auto it = index.find(y);
          if (it != index.end() && it->second >= prev_begin && it->second < prev_end) p.push_back(it->second);
        }
      }
      index.emplace(x, static_cast<std::uint32_t>(g.nodes.size()));
      g.nodes.push_back(x);
      g.preds.push_back(std::move(p));
    }
    prev_begin = begin;
    prev_end = g.nodes.size();
  }
  return dags_.emplace(key, std::move(g)).first->second;
}

ProjectionResult ProjectionEngine::project(const Triple& t, HalfInt r) {
  const VertexId ends[3] = {truncation(t.a), truncation(t.b), truncation(t.c)};
  const GeodesicDag* dags[3] = {&dag(ends[0], ends[1]), &dag(ends[0], ends[2]), &dag(ends[1], ends[2])};
  ProjectionResult out;
  out.r = r;
  out.depth = depth_;
  const int thr = threshold_of(r);
  if (thr < 0) return out;

  const std::size_t n = ball_.size();
  std::vector<std::uint8_t> inside(n, 1);
  for (const GeodesicDag* g : dags) {
    // Bottleneck dynamic programme for all vertices at once, one DAG node
    // at a time.
    std::vector<std::vector<std::uint8_t>> best(g->nodes.size());
    std::vector<std::size_t> last_use(g->nodes.size(), 0);
    for (std::size_t i = 0; i < g->nodes.size(); ++i) {
      for (std::uint32_t p : g->preds[i]) last_use[p] = i;
    }
    for (std::size_t i = 0; i < g->nodes.size(); ++i) {
      const auto row = ball_.compact_distances_from(g->nodes[i]);
      std::vector<std::uint8_t> cur;
      if (g->preds[i].empty()) {
        cur = *row;
      } else {
        cur.assign(n, 0);
        std::uint8_t* dst = cur.data();
        for (std::uint32_t p : g->preds[i]) {
          const std::uint8_t* src = best[p].data();
          for (std::size_t x = 0; x < n; ++x) dst[x] = std::max(dst[x], src[x]);
        }
        const std::uint8_t* rd = row->data();
        for (std::size_t x = 0; x < n; ++x) dst[x] = std::min(dst[x], rd[x]);
      }
      best[i] = std::move(cur);
      for (std::uint32_t p : g->preds[i]) {
        if (last_use[p] == i) std::vector<std::uint8_t>().swap(best[p]);
      }
    }
    const std::vector<std::uint8_t>& far = best.back();
    for (std::size_t x = 0; x < n; ++x) {
      if (far[x] > thr) inside[x] = 0;
    }
  }
  const bool exact_metric = ball_.model().is_free();
  for (std::size_t x = 0; x < n; ++x) {
    const auto v = static_cast<VertexId>(x);
    if (inside[x]) {
      out.vertices.push_back(v);
    } else if (!exact_metric && ball_.dist_origin(v) + thr > ball_.radius()) {
      out.truncated = true;
    }
  }
  return out;
}

bool ProjectionEngine::contains(const Triple& t, HalfInt r, VertexId x) {
  const int thr = threshold_of(r);
  if (thr < 0) return false;
  const VertexId ends[3] = {truncation(t.a), truncation(t.b), truncation(t.c)};
  const GeodesicDag* dags[3] = {&dag(ends[0], ends[1]), &dag(ends[0], ends[2]), &dag(ends[1], ends[2])};
  const auto row = ball_.compact_distances_from(x);
  for (const GeodesicDag* g : dags) {
    if (farthest_geodesic(*g, [&](VertexId y) { return static_cast<int>((*row)[y]); }) > thr) return false;
  }
  return true;
}

ProjectionResult coarse_projection(const Ball& ball, const Triple& t, HalfInt r, int depth) {
  return ProjectionEngine(ball, depth).project(t, r);
}

bool projection_contains(const Ball& ball, const Triple& t, HalfInt r, int depth, VertexId x) {
  return ProjectionEngine(ball, depth).contains(t, r, x);
}

DiameterBounds vertex_set_diameter(const Ball& ball, std::span<const VertexId> vertices, int max_searches) {
  DiameterBounds out;
  if (vertices.size() <= 1) return out;
  std::vector<VertexId> order(vertices.begin(), vertices.end());
  std::stable_sort(order.begin(), order.end(),
                   [&](VertexId a, VertexId b) { return ball.dist_origin(a) > ball.dist_origin(b); });
  const int far = ball.dist_origin(order.front());
  // Balls: d(x, y) <= |x| + |y|, so vertices are visited by decreasing |x|
  // until |x| + far cannot beat the best eccentricity found.
  const bool bounded = !ball.is_tube();
  out.upper = bounded ? 2 * far : std::numeric_limits<int>::max();
  int searches = 0;
  for (VertexId x : order) {
    if (bounded && ball.dist_origin(x) + far <= out.lower) {
      out.upper = out.lower;
      return out;
    }
    if (searches == max_searches) {
      if (bounded) out.upper = std::max(out.lower, ball.dist_origin(x) + far);
      return out;
    }
    ++searches;
    VertexId src[1] = {x};
    const std::vector<int> d = ball.multi_source_distances(src);
    for (VertexId y : vertices) out.lower = std::max(out.lower, d[y]);
  }
  out.upper = out.lower;
  return out;
}

DiameterReport projection_diameter(const Ball& ball, std::span<const Triple> triples, HalfInt r, int depth) {
  DiameterReport rep;
  rep.triples = triples.size();
  ProjectionEngine engine(ball, depth);
  for (const Triple& t : triples) {
    const ProjectionResult p = engine.project(t, r);
    if (p.truncated) ++rep.truncated;
    if (p.vertices.empty()) {
      ++rep.empty;
      rep.diameters.push_back(-1);
      continue;
    }
    const DiameterBounds d = vertex_set_diameter(ball, p.vertices);
    if (!d.exact()) ++rep.inexact;
    rep.diameters.push_back(d.upper);
    rep.q_emp = std::max(rep.q_emp, d.upper);
  }
  return rep;
}

std::vector<std::size_t> vertex_preimage(const Ball& ball, VertexId v, HalfInt r, std::span<const Triple> triples,
                                         int depth) {
  ProjectionEngine engine(ball, depth);
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < triples.size(); ++i) {
    if (engine.contains(triples[i], r, v)) out.push_back(i);
  }
  return out;
}

int union_diameter(const Ball& ball, std::span<const Triple> triples, std::span<const std::size_t> which, HalfInt r,
                   int depth) {
  ProjectionEngine engine(ball, depth);
  std::vector<VertexId> all;
  for (std::size_t i : which) {
    const ProjectionResult p = engine.project(triples[i], r);
    all.insert(all.end(), p.vertices.begin(), p.vertices.end());
  }
  std::sort(all.begin(), all.end());
  all.erase(std::unique(all.begin(), all.end()), all.end());
  return vertex_set_diameter(ball, all).upper;
}

std::vector<Triple> sample_triples(const Ball& ball, std::size_t count, std::uint64_t seed, int depth, HalfInt nu) {
  std::mt19937_64 rng(seed);
  const int prefix = ball.model().is_free() ? depth : std::max(1, depth - 1);
  auto distinct = [&](const BoundaryPoint& x, const BoundaryPoint& y) {
    try {
      return !gromov_product_infinity(ball, ball.origin(), x, y, std::max(1, depth), nu).not_distinct;
    } catch (const PrecisionError&) {
      return false;
    }
  };
  std::vector<Triple> out;
  std::size_t attempts = 0;
  while (out.size() < count) {
    if (++attempts > 1000 * (count + 1)) throw ResourceError("could not sample distinct boundary triples");
    Triple t;
    t.a = random_boundary_point(ball, rng, prefix, 3, ball.radius());
    t.b = random_boundary_point(ball, rng, prefix, 3, ball.radius());
    t.c = random_boundary_point(ball, rng, prefix, 3, ball.radius());
    if (distinct(t.a, t.b) && distinct(t.a, t.c) && distinct(t.b, t.c)) out.push_back(std::move(t));
  }
  return out;
}

ConstantsLedger build_ledger(HalfInt delta, int q_of_3delta, int diam_pi_d0, int c_v) {
  if (delta < HalfInt(0) || q_of_3delta < 0 || diam_pi_d0 < 0 || c_v < 0) {
    throw InvalidInput("ledger inputs must be non-negative");
  }
  ConstantsLedger l;
  l.delta = delta;
  l.q_of_3delta = q_of_3delta;
  l.diam_pi_d0 = diam_pi_d0;
  l.c_v = c_v;
  l.h = static_cast<int>(std::max<std::int64_t>((2 * delta).floor(), q_of_3delta)) + 1;
  const HalfInt first = HalfInt(24 * l.h + diam_pi_d0) + 52 * delta;
  const HalfInt second = HalfInt(c_v + 4 * l.h) + 11 * delta;
  l.r = static_cast<int>(std::max(first, second).floor()) + 1;
  return l;
}

}  // namespace hypstab
