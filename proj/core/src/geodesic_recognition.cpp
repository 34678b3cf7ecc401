#include "hypstab/geodesic_recognition.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <random>
#include <string>
#include <set>
#include <unordered_map>

#include "hypstab/errors.hpp"

namespace hypstab {

PiecewiseGeodesic PiecewiseGeodesic::through(const Ball& ball, std::vector<VertexId> breakpoints) {
  PiecewiseGeodesic pw;
  pw.breakpoints = std::move(breakpoints);
  for (std::size_t i = 0; i + 1 < pw.breakpoints.size(); ++i) {
    pw.segments.push_back(ball.some_geodesic(pw.breakpoints[i], pw.breakpoints[i + 1]));
  }
  return pw;
}

void PiecewiseGeodesic::validate(const Ball& ball) const {
  if (breakpoints.size() < 2 || segments.size() + 1 != breakpoints.size()) {
    throw InvalidInput("piecewise geodesic needs k >= 1 segments joining k + 1 breakpoints");
  }
  for (std::size_t i = 0; i < segments.size(); ++i) {
    const auto& seg = segments[i].vertices;
    if (seg.empty() || seg.front() != breakpoints[i] || seg.back() != breakpoints[i + 1]) {
      throw InvalidInput("segment " + std::to_string(i) + " does not join its breakpoints");
    }
    for (std::size_t j = 0; j + 1 < seg.size(); ++j) {
      const auto nb = ball.neighbors(seg[j]);
      if (std::find(nb.begin(), nb.end(), seg[j + 1]) == nb.end()) {
        throw InvalidInput("segment " + std::to_string(i) + " is not an edge path");
      }
    }
    if (static_cast<int>(segments[i].length()) != ball.distance(seg.front(), seg.back())) {
      throw InvalidInput("segment " + std::to_string(i) + " is not geodesic");
    }
  }
}

std::vector<VertexId> PiecewiseGeodesic::vertices() const {
  std::vector<VertexId> out;
  for (const auto& seg : segments) {
    const std::size_t skip = out.empty() ? 0 : 1;
    out.insert(out.end(), seg.vertices.begin() + static_cast<std::ptrdiff_t>(skip), seg.vertices.end());
  }
  return out;
}

std::vector<HalfInt> corner_products(const PiecewiseGeodesic& pw, const Ball& ball) {
  std::vector<HalfInt> out;
  for (std::size_t i = 1; i + 1 < pw.breakpoints.size(); ++i) {
    out.push_back(ball.gromov_product(pw.breakpoints[i - 1], pw.breakpoints[i + 1], pw.breakpoints[i]));
  }
  return out;
}

int hausdorff_distance(const Ball& ball, std::span<const VertexId> a, std::span<const VertexId> b) {
  if (a.empty() || b.empty()) throw InvalidInput("Hausdorff distance of an empty set");
  int out = 0;
  auto one_side = [&](std::span<const VertexId> from, std::span<const VertexId> to) {
    const auto d = ball.multi_source_distances(from);
    for (VertexId v : to) {
      if (d[v] == kUnreached) throw ContainmentError("sets are not connected inside the region");
      out = std::max(out, d[v]);
    }
  };
  one_side(a, b);
  one_side(b, a);
  return out;
}

BrokenGeodesicVerdict check_broken_geodesic(const PiecewiseGeodesic& pw, HalfInt l, HalfInt delta,
                                            const Ball& ball) {
  pw.validate(ball);
  const VertexId p0 = pw.breakpoints.front();
  const VertexId pk = pw.breakpoints.back();
  if (!ball.geodesics_contained(p0, pk)) throw ContainmentError("geodesic joining the endpoints escapes the ball");

  BrokenGeodesicVerdict v;
  v.min_segment = static_cast<int>(pw.segments.front().length());
  for (const auto& seg : pw.segments) v.min_segment = std::min(v.min_segment, static_cast<int>(seg.length()));
  for (HalfInt c : corner_products(pw, ball)) v.max_corner = std::max(v.max_corner, c);
  v.segments_long = HalfInt(v.min_segment) > 2 * l + 8 * delta;
  v.corners_small = v.max_corner <= l;

  const auto geo = ball.some_geodesic(p0, pk);
  const auto verts = pw.vertices();
  v.hausdorff = hausdorff_distance(ball, verts, geo.vertices);
  v.bound = l + 4 * delta;
  v.pass = !v.hypotheses() || HalfInt(v.hausdorff) <= v.bound;
  return v;
}

namespace {

// Length-4 cyclic subwords of the relators and their inverses; a segment
// avoiding them contains no half relator.
std::set<std::vector<Letter>> half_relator_pieces(const GroupModel& model) {
  std::set<std::vector<Letter>> out;
  for (const Word& rel : model.relators()) {
    for (const Word& r : {rel, rel.inverse()}) {
      const std::size_t n = r.size();
      for (std::size_t i = 0; i < n; ++i) {
        std::vector<Letter> piece;
        for (std::size_t j = 0; j < 4; ++j) piece.push_back(r[(i + j) % n]);
        out.insert(piece);
      }
    }
  }
  return out;
}

// Appends `len` letters to w: first undoing up to `back` letters of w, then
// freely reduced random letters avoiding half relators.
void append_segment(Word& w, std::size_t len, std::size_t back, const GroupModel& model,
                    const std::set<std::vector<Letter>>& pieces, std::mt19937_64& rng) {
  const std::size_t start = w.size();
  back = std::min({back, len, start});
  for (std::size_t i = 0; i < back; ++i) w.push_back(static_cast<Letter>(-w[start - 1 - i]));
  std::uniform_int_distribution<int> gen(1, model.num_generators());
  std::bernoulli_distribution sign(0.5);
  while (w.size() < start + len) {
    const auto x = static_cast<Letter>(gen(rng) * (sign(rng) ? 1 : -1));
    if (w.size() > start && w[w.size() - 1] == -x) continue;
    if (w.size() == start && start > 0 && w[start - 1] == -x) continue;
    if (back > 0 && w.size() == start + back && start > back && w[start - 1 - back] == -x) continue;
    if (w.size() >= start + 3) {
      const std::vector<Letter> tail{w[w.size() - 3], w[w.size() - 2], w[w.size() - 1], x};
      if (pieces.count(tail)) continue;
    }
    w.push_back(x);
  }
}

}  // namespace

BrokenScanReport broken_geodesic_scan(const GroupModel& model, HalfInt delta, const BrokenScanOptions& options) {
  if (options.segments < 2 || options.max_backtrack < 0 || options.length_spread < 0 || options.thickness < 0) {
    throw InvalidInput("broken scan needs >= 2 segments and non-negative lengths");
  }
  const HalfInt floor_len = 2 * HalfInt(options.max_backtrack) + 8 * delta + HalfInt(1);
  const int min_len = options.min_length > 0 ? options.min_length : floor_len.floor();
  const auto pieces = half_relator_pieces(model);
  std::mt19937_64 rng(options.seed);
  std::uniform_int_distribution<int> length(min_len, min_len + options.length_spread);
  std::uniform_int_distribution<int> backtrack(0, options.max_backtrack);

  BrokenScanReport rep;
  rep.max_slack_used = HalfInt(-1'000'000);
  while (rep.instances < options.instances && rep.rounds < options.max_rounds) {
    ++rep.rounds;
    Word w;
    std::vector<std::size_t> offsets{0};
    for (int i = 0; i < options.segments; ++i) {
      append_segment(w, static_cast<std::size_t>(length(rng)), i == 0 ? 0 : static_cast<std::size_t>(backtrack(rng)),
                     model, pieces, rng);
      offsets.push_back(w.size());
    }
    BuildOptions build;
    build.anchor_slack = 2 * options.max_backtrack + 4;
    const Ball tube = build_tube(model, free_reduce(w), options.thickness, build);
    std::vector<VertexId> bps;
    for (std::size_t off : offsets) bps.push_back(tube.at(w.prefix(off)));
    const auto whole = PiecewiseGeodesic::through(tube, bps);
    const auto corners = corner_products(whole, tube);

    for (std::size_t a = 0; a < bps.size() && rep.instances < options.instances; ++a) {
      for (std::size_t b = a + 2; b < bps.size() && rep.instances < options.instances; ++b) {
        HalfInt l;
        int min_seg = static_cast<int>(whole.segments[a].length());
        for (std::size_t i = a + 1; i < b; ++i) l = std::max(l, corners[i - 1]);
        for (std::size_t i = a; i < b; ++i) min_seg = std::min(min_seg, static_cast<int>(whole.segments[i].length()));
        if (!(HalfInt(min_seg) > 2 * l + 8 * delta)) {
          ++rep.rejected;
          continue;
        }
        PiecewiseGeodesic sub;
        sub.breakpoints.assign(bps.begin() + static_cast<std::ptrdiff_t>(a), bps.begin() + static_cast<std::ptrdiff_t>(b + 1));
        sub.segments.assign(whole.segments.begin() + static_cast<std::ptrdiff_t>(a),
                            whole.segments.begin() + static_cast<std::ptrdiff_t>(b));
        const auto v = check_broken_geodesic(sub, l, delta, tube);
        ++rep.instances;
        if (!v.pass) ++rep.failures;
        rep.max_hausdorff = std::max(rep.max_hausdorff, v.hausdorff);
        rep.max_l = std::max(rep.max_l, l);
        rep.max_slack_used = std::max(rep.max_slack_used, HalfInt(v.hausdorff) - v.bound);
      }
    }
  }
  return rep;
}

namespace {

struct UnionFind {
  std::vector<std::size_t> parent;
  explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  std::size_t find(std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void join(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
};

}  // namespace

std::vector<std::vector<VertexId>> r_connected_components(std::span<const VertexId> s, double r,
                                                          const Ball& ball) {
  std::vector<VertexId> pts(s.begin(), s.end());
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  std::unordered_map<VertexId, std::size_t> index;
  for (std::size_t i = 0; i < pts.size(); ++i) index.emplace(pts[i], i);

  UnionFind uf(pts.size());
  if (r >= 0) {
    const int reach = static_cast<int>(std::floor(r));
    for (std::size_t i = 0; i < pts.size(); ++i) {
      for (const auto& [y, d] : ball.neighborhood(pts[i], reach)) {
        const auto it = index.find(y);
        if (it != index.end()) uf.join(i, it->second);
      }
    }
  }
  std::map<std::size_t, std::vector<VertexId>> groups;
  for (std::size_t i = 0; i < pts.size(); ++i) groups[uf.find(i)].push_back(pts[i]);
  std::vector<std::vector<VertexId>> out;
  for (auto& [root, members] : groups) out.push_back(std::move(members));
  return out;
}

void CoarseGeodesicData::validate(const Ball& ball) const {
  if (s.empty()) throw HypothesisError("data", "S is empty");
  if (h < 0 || r <= 0) throw HypothesisError("data", "need H >= 0 and R > 0");
  for (VertexId v : s) {
    if (v >= ball.size()) throw HypothesisError("data", "point of S outside the region");
    const auto it = window_of.find(v);
    if (it == window_of.end() || it->second >= windows.size() || windows[it->second].vertices.empty()) {
      throw HypothesisError("data", "point of S without a local geodesic");
    }
  }
  const auto comps = r_connected_components(s, r / 4.0, ball);
  if (comps.size() != 1) {
    throw HypothesisError("connectivity", "S splits into " + std::to_string(comps.size()) + " R/4-components");
  }

  const auto near_s = ball.multi_source_distances(s, h);
  for (std::size_t w = 0; w < windows.size(); ++w) {
    const auto& win = windows[w].vertices;
    const auto near_w = ball.multi_source_distances(win, h);
    const bool s_fits = std::all_of(s.begin(), s.end(), [&](VertexId v) { return near_w[v] <= h; });
    const bool w_dense = std::all_of(win.begin(), win.end(), [&](VertexId v) { return near_s[v] <= h; });
    if (s_fits && w_dense) continue;
    for (VertexId p : s) {
      if (window_of.at(p) != w) continue;
      const auto dp = ball.distances_from(p);
      if (!s_fits) {
        for (VertexId q : s) {
          if ((*dp)[q] <= r && near_w[q] > h) {
            throw HypothesisError("local-fit", "S in B_R(s) leaves N_H(gamma_s) at " + ball.model().format(ball.word(p)));
          }
        }
      }
      if (!w_dense) {
        for (VertexId q : win) {
          if ((*dp)[q] <= r && near_s[q] > h) {
            throw HypothesisError("local-density",
                                  "gamma_s in B_R(s) leaves N_H(S) at " + ball.model().format(ball.word(p)));
          }
        }
      }
    }
  }
}

CoarseGeodesicData axis_coarse_data(const Ball& tube, int h, int r, std::uint64_t seed, bool all_neighbors) {
  if (!tube.is_tube()) throw InvalidInput("axis data needs a tube region");
  if (h < 0) throw InvalidInput("H must be non-negative");
  CoarseGeodesicData data;
  data.h = h;
  data.r = r;
  GeodesicPath axis;
  for (std::size_t i = 0; i < tube.num_seeds(); ++i) axis.vertices.push_back(tube.seed(i));
  if (all_neighbors) {
    const auto d = tube.multi_source_distances(axis.vertices, h);
    for (VertexId v = 0; v < tube.size(); ++v)
      if (d[v] <= h) data.s.push_back(v);
  } else {
    std::mt19937_64 rng(seed);
    for (VertexId p : axis.vertices) {
      const auto nb = tube.neighborhood(p, h);
      std::uniform_int_distribution<std::size_t> pick(0, nb.size() - 1);
      data.s.push_back(nb[pick(rng)].first);
    }
    std::sort(data.s.begin(), data.s.end());
    data.s.erase(std::unique(data.s.begin(), data.s.end()), data.s.end());
  }
  data.windows.push_back(std::move(axis));
  for (VertexId v : data.s) data.window_of.emplace(v, 0);
  return data;
}

namespace {

class ChainWalker {
 public:
  ChainWalker(const CoarseGeodesicData& data, const Ball& ball) : data_(data), ball_(ball) {
    sorted_ = data.s;
    std::sort(sorted_.begin(), sorted_.end());
  }

  // Index of the vertex of `win` nearest to p (least index on ties).
  std::size_t project(VertexId p, const GeodesicPath& win) const {
    const auto d = ball_.distances_from(p);
    std::size_t best = 0;
    for (std::size_t i = 1; i < win.vertices.size(); ++i)
      if ((*d)[win.vertices[i]] < (*d)[win.vertices[best]]) best = i;
    return best;
  }

  VertexId pick_near(VertexId target, const std::string& step) const {
    std::optional<VertexId> best;
    for (const auto& [y, d] : ball_.neighborhood(target, data_.h)) {
      if (!std::binary_search(sorted_.begin(), sorted_.end(), y)) continue;
      if (!best || shortlex_less(ball_.word(y), ball_.word(*best))) best = y;
    }
    if (!best) {
      throw HypothesisError(step, "no point of S within H of " + ball_.model().format(ball_.word(target)));
    }
    return *best;
  }

  // Walks from s0 in direction `dir` along gamma_{s0}; returns s_{+-1}, s_{+-2}, ...
  std::vector<VertexId> walk(VertexId s0, int dir) const {
    const int half = data_.r / 2;
    std::vector<VertexId> out;
    VertexId cur = s0;
    VertexId prev = kNoVertex;
    const std::string sign = dir > 0 ? "+" : "-";
    for (std::size_t step = 1; step <= ball_.size(); ++step) {
      const auto& win = data_.gamma(cur);
      const auto q = static_cast<long>(project(cur, win));
      int way = dir;
      if (prev != kNoVertex) {
        const auto q_prev = static_cast<long>(project(prev, win));
        if (q_prev == q) throw HypothesisError("orientation " + sign + std::to_string(step), "cannot orient gamma_s");
        way = q > q_prev ? 1 : -1;
      }
      const long target = q + way * half;
      if (target < 0 || target >= static_cast<long>(win.vertices.size())) break;
      const VertexId next =
          pick_near(win.vertices[static_cast<std::size_t>(target)], "step " + sign + std::to_string(step));
      out.push_back(next);
      prev = cur;
      cur = next;
    }
    return out;
  }

 private:
  const CoarseGeodesicData& data_;
  const Ball& ball_;
  std::vector<VertexId> sorted_;
};

}  // namespace

ReconstructionResult reconstruct(const CoarseGeodesicData& data, HalfInt delta, HalfInt nu, const Ball& ball) {
  const HalfInt h(data.h);
  const HalfInt r(data.r);
  if (!(r > 24 * h + 16 * delta)) {
    throw HypothesisError("precondition", "need R > 24H + 16 delta, got R = " + r.str() + " against " +
                                              (24 * h + 16 * delta).str());
  }
  data.validate(ball);

  const VertexId centre = ball.is_tube() ? ball.seed(ball.num_seeds() / 2) : ball.origin();
  const auto dc = ball.distances_from(centre);
  VertexId s0 = data.s.front();
  for (VertexId v : data.s) {
    if ((*dc)[v] < (*dc)[s0] || ((*dc)[v] == (*dc)[s0] && shortlex_less(ball.word(v), ball.word(s0)))) s0 = v;
  }

  const ChainWalker walker(data, ball);
  const auto plus = walker.walk(s0, 1);
  const auto minus = walker.walk(s0, -1);
  if (plus.empty() || minus.empty() || plus.size() + minus.size() + 1 < 3) {
    throw HypothesisError("chain", "chain shorter than 3 (region too small for R)");
  }

  ReconstructionResult res;
  res.chain.assign(minus.rbegin(), minus.rend());
  res.origin_index = res.chain.size();
  res.chain.push_back(s0);
  res.chain.insert(res.chain.end(), plus.begin(), plus.end());
  res.path = PiecewiseGeodesic::through(ball, res.chain);

  const VertexId front = res.chain.front();
  const VertexId back = res.chain.back();
  if (!ball.geodesics_contained(front, back)) throw ContainmentError("limit geodesic escapes the ball");
  res.limit_geodesic = ball.some_geodesic(front, back);

  auto& est = res.estimates;
  for (const auto& seg : res.path.segments) est.max_step = std::max(est.max_step, static_cast<int>(seg.length()));
  for (HalfInt c : corner_products(res.path, ball)) est.max_corner = std::max(est.max_corner, c);
  const std::size_t o = res.origin_index;
  est.min_seed_step = std::min(static_cast<int>(res.path.segments[o - 1].length()),
                               static_cast<int>(res.path.segments[o].length()));
  est.seed_corner = ball.gromov_product(res.chain[o - 1], res.chain[o + 1], s0);
  est.steps_ok = 2 * HalfInt(est.max_step) <= r + 4 * h;
  est.corners_ok = est.max_corner <= 5 * h;
  est.seed_ok = 2 * HalfInt(est.min_seed_step) >= r - 4 * h && est.seed_corner <= 3 * h;

  // Points of S between the extreme chain points.
  const int span = static_cast<int>(res.limit_geodesic.length());
  const auto df = ball.distances_from(front);
  const auto db = ball.distances_from(back);
  std::vector<VertexId> inside;
  for (VertexId v : data.s)
    if ((*df)[v] <= span && (*db)[v] <= span) inside.push_back(v);
  res.hausdorff_to_s = HalfInt(hausdorff_distance(ball, res.limit_geodesic.vertices, inside));
  res.hausdorff_bound = 3 * h + 6 * delta;
  res.hausdorff_ok = res.hausdorff_to_s <= res.hausdorff_bound;
  res.shadowing_ok = res.hausdorff_to_s + HalfInt::from_twice(1) < res.hausdorff_bound + HalfInt(1);

  // Products at s_0 of gamma_{s_0} (oriented towards s_1) and the limit
  // geodesic, truncated R from s_0 or at the window end.
  const auto& win = data.gamma(s0).vertices;
  const auto q0 = static_cast<long>(walker.project(s0, data.gamma(s0)));
  const long last = static_cast<long>(win.size()) - 1;
  const auto q1 = static_cast<long>(walker.project(res.chain[o + 1], data.gamma(s0)));
  const int way = q1 >= q0 ? 1 : -1;
  const VertexId y_plus = win[static_cast<std::size_t>(std::clamp(q0 + way * data.r, 0L, last))];
  const VertexId y_minus = win[static_cast<std::size_t>(std::clamp(q0 - way * data.r, 0L, last))];
  res.endpoint_products = {ball.gromov_product(y_minus, front, s0) - 2 * nu,
                           ball.gromov_product(y_plus, back, s0) - 2 * nu};
  res.product_bound = r - (4 * h + 10 * delta) - 2 * nu;
  res.products_ok =
      res.endpoint_products.first >= res.product_bound && res.endpoint_products.second >= res.product_bound;
  return res;
}

}  // namespace hypstab
