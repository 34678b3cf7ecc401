#include "hypstab/cayley_ball.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <deque>

#include "hypstab/errors.hpp"

namespace hypstab {
namespace {

std::uint64_t mix_anchor(std::uint64_t key, int anchor) {
  std::uint64_t a = static_cast<std::uint64_t>(anchor) + 0x9e3779b97f4a7c15ULL;
  a ^= a >> 31;
  a *= 0xbf58476d1ce4e5b9ULL;
  return key ^ a;
}

// Per-thread BFS scratch with epoch stamping so bounded searches on large
// regions cost only what they visit.
struct Scratch {
  std::vector<int> dist;
  std::vector<std::uint32_t> stamp;
  std::uint32_t epoch = 0;

  void begin(std::size_t n) {
    if (stamp.size() < n) {
      stamp.assign(n, 0);
      dist.assign(n, 0);
      epoch = 0;
    }
    if (++epoch == 0) {
      std::fill(stamp.begin(), stamp.end(), 0);
      epoch = 1;
    }
  }
  bool seen(VertexId v) const { return stamp[v] == epoch; }
  void set(VertexId v, int d) {
    stamp[v] = epoch;
    dist[v] = d;
  }
  int get(VertexId v) const { return stamp[v] == epoch ? dist[v] : kUnreached; }
};

Scratch& scratch(int slot) {
  thread_local Scratch s[2];
  return s[slot];
}

}  // namespace

Ball::Ball(GroupModel model, int depth)
    : model_(std::move(model)), depth_(depth), degree_(model_.degree()) {
  if (!model_.is_free()) gens_ = surface_generators(model_.parameter());
}

std::uint64_t Ball::key_of(const Word& local, const Su11& mat) const {
  return model_.is_free() ? static_cast<std::uint64_t>(local.hash()) : fingerprint(mat);
}

namespace detail {

void KeyIndex::insert(std::uint64_t key, VertexId id) {
  if (2 * (used_ + 1) > slots_.size()) rehash(std::max<std::size_t>(1024, 2 * slots_.size()));
  std::size_t i = home(key);
  while (slots_[i].second != kNoVertex) i = (i + 1) & mask_;
  slots_[i] = {key, id};
  ++used_;
}

void KeyIndex::rehash(std::size_t capacity) {
  auto old = std::move(slots_);
  slots_.assign(capacity, {0, kNoVertex});
  mask_ = capacity - 1;
  shift_ = 64 - std::countr_zero(capacity);
  used_ = 0;
  for (const auto& [k, v] : old)
    if (v != kNoVertex) insert(k, v);
}

}  // namespace detail

Word Ball::relative_seed_word(int from, int to) const {
  // seed_from^-1 * seed_to
  if (from <= to) return path_.subword(static_cast<std::size_t>(from), static_cast<std::size_t>(to - from));
  return path_.subword(static_cast<std::size_t>(to), static_cast<std::size_t>(from - to)).inverse();
}

VertexId Ball::lookup(int anchor, const Word& local, const Su11& mat) const {
  const int lo = std::max(0, anchor - span_);
  const int hi = std::min(static_cast<int>(seeds_.size()) - 1, anchor + span_);

  if (model_.is_free()) {
    auto probe = [&](int a, const std::vector<Letter>& w) -> VertexId {
      const Word word(w);
      return index_.find_if(mix_anchor(word.hash(), a),
                            [&](VertexId v) { return anchor_[v] == a && local_[v] == word; });
    };
    // Relative element, freely reduced, re-expressed against neighbouring
    // anchors by prepending path letters.
    const Word reduced = free_reduce(local);
    const std::vector<Letter> base(reduced.begin(), reduced.end());
    if (VertexId v = probe(anchor, base); v != kNoVertex) return v;
    auto prepend = [](std::vector<Letter>& w, Letter x) {
      if (!w.empty() && w.front() == inverse(x)) {
        w.erase(w.begin());
      } else {
        w.insert(w.begin(), x);
      }
    };
    std::vector<Letter> w = base;
    for (int a = anchor - 1; a >= lo; --a) {
      prepend(w, path_[static_cast<std::size_t>(a)]);
      if (VertexId v = probe(a, w); v != kNoVertex) return v;
    }
    w = base;
    for (int a = anchor + 1; a <= hi; ++a) {
      prepend(w, inverse(path_[static_cast<std::size_t>(a - 1)]));
      if (VertexId v = probe(a, w); v != kNoVertex) return v;
    }
    return kNoVertex;
  }

  // Surface groups: probe by matrix fingerprint, confirm with Dehn.
  auto probe = [&](int a, const Su11& m) -> VertexId {
    for (std::uint64_t key : fingerprint_candidates(m)) {
      const VertexId v = index_.find_if(mix_anchor(key, a), [&](VertexId u) {
        return anchor_[u] == a && model_.is_trivial(local_[u].inverse() * relative_seed_word(a, anchor) * local);
      });
      if (v != kNoVertex) return v;
    }
    return kNoVertex;
  };
  if (VertexId v = probe(anchor, mat); v != kNoVertex) return v;
  Su11 m = mat;
  for (int a = anchor - 1; a >= lo; --a) {
    m = letter_matrix(gens_, path_[static_cast<std::size_t>(a)]) * m;
    if (VertexId v = probe(a, m); v != kNoVertex) return v;
  }
  m = mat;
  for (int a = anchor + 1; a <= hi; ++a) {
    m = letter_matrix(gens_, inverse(path_[static_cast<std::size_t>(a - 1)])) * m;
    if (VertexId v = probe(a, m); v != kNoVertex) return v;
  }
  return kNoVertex;
}

void Ball::grow(const BuildOptions& options) {
  auto add_vertex = [&](int anchor, Word local, Su11 mat, int dist) -> VertexId {
    if (anchor_.size() >= options.max_vertices) {
      throw ResourceError("Cayley region exceeds " + std::to_string(options.max_vertices) +
                          " vertices (depth " + std::to_string(depth_) + ", model " + model_.spec() +
                          "); reduce the radius");
    }
    const auto id = static_cast<VertexId>(anchor_.size());
    index_.insert(mix_anchor(key_of(local, mat), anchor), id);
    anchor_.push_back(anchor);
    local_.push_back(std::move(local));
    mat_.push_back(mat);
    dist_.push_back(dist);
    adjacency_.resize(adjacency_.size() + static_cast<std::size_t>(degree_), kNoVertex);
    return id;
  };

  // Seeds.  Coinciding seeds are merged (the path must be geodesic for the
  // anchor span bound, but merging keeps the structure consistent anyway).
  std::vector<VertexId> frontier;
  for (std::size_t i = 0; i <= path_.size(); ++i) {
    const int a = static_cast<int>(i);
    VertexId v = anchor_.empty() ? kNoVertex : lookup(a, Word{}, Su11::identity());
    if (v == kNoVertex) {
      v = add_vertex(a, Word{}, Su11::identity(), 0);
      frontier.push_back(v);
    }
    seeds_.push_back(static_cast<int>(v));
  }

  for (int d = 0; d <= depth_ && !frontier.empty(); ++d) {
    std::vector<VertexId> next;
    for (VertexId v : frontier) {
      for (int rank = 0; rank < degree_; ++rank) {
        const std::size_t slot = static_cast<std::size_t>(v) * static_cast<std::size_t>(degree_) +
                                 static_cast<std::size_t>(rank);
        if (adjacency_[slot] != kNoVertex) continue;
        const Letter x = letter_from_rank(rank);
        Word cand = local_[v];
        cand.push_back(x);
        const Su11 m = model_.is_free() ? Su11::identity() : mat_[v] * letter_matrix(gens_, x);
        VertexId u = lookup(anchor_[v], cand, m);
        if (u == kNoVertex) {
          if (d == depth_) continue;
          u = add_vertex(anchor_[v], model_.is_free() ? free_reduce(cand) : cand, m, d + 1);
          next.push_back(u);
        }
        adjacency_[slot] = u;
        adjacency_[static_cast<std::size_t>(u) * static_cast<std::size_t>(degree_) +
                   static_cast<std::size_t>(letter_rank(inverse(x)))] = v;
      }
    }
    frontier = std::move(next);
  }
}

Ball build_ball(const GroupModel& model, int radius, const BuildOptions& options) {
  if (radius < 0) throw InvalidInput("ball radius must be non-negative");
  Ball b(model, radius);
  b.span_ = 0;
  b.grow(options);
  return b;
}

Ball build_tube(const GroupModel& model, const Word& path, int thickness, const BuildOptions& options) {
  if (thickness < 0) throw InvalidInput("tube thickness must be non-negative");
  if (!is_freely_reduced(path)) throw InvalidInput("tube path must be freely reduced");
  Ball b(model, thickness);
  b.path_ = path;
  b.span_ = 2 * thickness + 1 + std::max(0, options.anchor_slack);
  b.grow(options);
  return b;
}

Word Ball::word(VertexId v) const {
  const int a = anchor_[v];
  if (a == 0) return local_[v];
  return model_.is_free() ? free_reduce(path_.prefix(static_cast<std::size_t>(a)) * local_[v])
                          : path_.prefix(static_cast<std::size_t>(a)) * local_[v];
}

std::vector<std::size_t> Ball::sphere_sizes() const {
  std::vector<std::size_t> out(static_cast<std::size_t>(depth_) + 1, 0);
  for (int d : dist_) ++out[static_cast<std::size_t>(d)];
  return out;
}

VertexId Ball::lookup_global(const Word& w) const {
  if (!is_tube()) {
    const Word local = model_.is_free() ? free_reduce(w) : model_.dehn_reduce(w);
    return lookup(0, local, model_.is_free() ? Su11::identity() : word_matrix(gens_, local));
  }
  // Tubes: express w relative to each seed and look it up where the
  // relative element is short.
  Word rel = model_.dehn_reduce(w);
  for (std::size_t i = 0; i <= path_.size(); ++i) {
    if (i > 0) rel = model_.dehn_reduce(Word{inverse(path_[i - 1])} * rel);
    if (static_cast<int>(rel.size()) > 2 * depth_ + 2) continue;
    const Su11 m = model_.is_free() ? Su11::identity() : word_matrix(gens_, rel);
    if (VertexId v = lookup(static_cast<int>(i), rel, m); v != kNoVertex) return v;
  }
  return kNoVertex;
}

std::optional<VertexId> Ball::find(const Word& w) const {
  const VertexId v = lookup_global(w);
  if (v == kNoVertex) return std::nullopt;
  return v;
}

VertexId Ball::at(const Word& w) const {
  if (auto v = find(w)) return *v;
  throw ContainmentError("element '" + model_.format(w) + "' is outside the Cayley region");
}

std::optional<VertexId> Ball::translate(VertexId v, const Word& w) const {
  Word cand = local_[v] * w;
  if (model_.is_free()) cand = free_reduce(cand);
  const Su11 m = model_.is_free() ? Su11::identity() : mat_[v] * word_matrix(gens_, w);
  const VertexId u = lookup(anchor_[v], cand, m);
  if (u == kNoVertex) return std::nullopt;
  return u;
}

int Ball::distance(VertexId u, VertexId v) const {
  if (u >= size() || v >= size()) throw ContainmentError("vertex outside Cayley region");
  if (u == v) return 0;
  // Two-sided BFS, always expanding the smaller frontier.
  Scratch& su = scratch(0);
  Scratch& sv = scratch(1);
  su.begin(size());
  sv.begin(size());
  su.set(u, 0);
  sv.set(v, 0);
  std::vector<VertexId> fu{u};
  std::vector<VertexId> fv{v};
  int du = 0;
  int dv = 0;
  while (!fu.empty() && !fv.empty()) {
    const bool expand_u = fu.size() <= fv.size();
    auto& frontier = expand_u ? fu : fv;
    Scratch& mine = expand_u ? su : sv;
    Scratch& other = expand_u ? sv : su;
    int& level = expand_u ? du : dv;
    std::vector<VertexId> next;
    int best = kUnreached;
    for (VertexId x : frontier) {
      for (VertexId y : neighbors(x)) {
        if (y == kNoVertex || mine.seen(y)) continue;
        mine.set(y, level + 1);
        if (other.seen(y)) best = std::min(best, level + 1 + other.get(y));
        next.push_back(y);
      }
    }
    if (best != kUnreached) return best;
    ++level;
    frontier = std::move(next);
  }
  return kUnreached;
}

std::shared_ptr<const std::vector<int>> Ball::distances_from(VertexId source) const {
  {
    std::lock_guard lock(memo_->mu);
    if (auto it = memo_->entries.find(source); it != memo_->entries.end()) return it->second;
  }
  VertexId src[1] = {source};
  auto result = std::make_shared<const std::vector<int>>(multi_source_distances(src));
  std::lock_guard lock(memo_->mu);
  // Keep at most about 2^25 cached distances.
  if ((memo_->entries.size() + 1) * size() > (std::size_t{1} << 25)) memo_->entries.clear();
  memo_->entries.emplace(source, result);
  return result;
}

std::shared_ptr<const std::vector<std::uint8_t>> Ball::compact_distances_from(VertexId source) const {
  {
    std::lock_guard lock(memo_->mu);
    if (auto it = memo_->rows8.find(source); it != memo_->rows8.end()) return it->second;
  }
  VertexId src[1] = {source};
  const std::vector<int> full = multi_source_distances(src);
  auto row = std::make_shared<std::vector<std::uint8_t>>(full.size());
  std::transform(full.begin(), full.end(), row->begin(),
                 [](int d) { return static_cast<std::uint8_t>(std::min(d, 255)); });
  std::lock_guard lock(memo_->mu);
  if ((memo_->rows8.size() + 1) * size() > (std::size_t{1} << 29)) memo_->rows8.clear();
  memo_->rows8.emplace(source, row);
  return row;
}

std::vector<int> Ball::multi_source_distances(std::span<const VertexId> sources, int max_depth) const {
  std::vector<int> dist(size(), kUnreached);
  std::deque<VertexId> queue;
  for (VertexId s : sources) {
    if (dist[s] != 0) {
      dist[s] = 0;
      queue.push_back(s);
    }
  }
  while (!queue.empty()) {
    const VertexId x = queue.front();
    queue.pop_front();
    if (dist[x] >= max_depth) continue;
    for (VertexId y : neighbors(x)) {
      if (y != kNoVertex && dist[y] == kUnreached) {
        dist[y] = dist[x] + 1;
        queue.push_back(y);
      }
    }
  }
  return dist;
}

std::vector<std::pair<VertexId, int>> Ball::neighborhood(VertexId v, int r, bool* touched_frontier) const {
  Scratch& s = scratch(0);
  s.begin(size());
  std::vector<std::pair<VertexId, int>> out{{v, 0}};
  s.set(v, 0);
  bool touched = false;
  for (std::size_t i = 0; i < out.size(); ++i) {
    const auto [x, d] = out[i];
    if (d >= r) continue;
    if (dist_[x] == depth_) touched = true;
    for (VertexId y : neighbors(x)) {
      if (y != kNoVertex && !s.seen(y)) {
        s.set(y, d + 1);
        out.emplace_back(y, d + 1);
      }
    }
  }
  if (touched_frontier) *touched_frontier = touched;
  return out;
}

std::optional<VertexId> Ball::relative(VertexId u, VertexId v) const {
  if (is_tube()) throw InvalidInput("relative elements need a ball, not a tube");
  if (u == v) return origin();
  const Word rel = local_[u].inverse() * local_[v];
  const Su11 m = model_.is_free() ? Su11::identity() : mat_[u].inverse() * mat_[v];
  const VertexId c = lookup(0, rel, m);
  if (c == kNoVertex) return std::nullopt;
  return c;
}

std::optional<int> Ball::group_distance(VertexId u, VertexId v) const {
  if (is_tube()) throw InvalidInput("group_distance needs a ball, not a tube");
  if (model_.is_free()) {
    return static_cast<int>(free_reduce(local_[u].inverse() * local_[v]).size());
  }
  if (auto c = relative(u, v)) return dist_[*c];
  return std::nullopt;
}

std::vector<std::vector<VertexId>> Ball::interval_from_origin(VertexId v) const {
  const int n = dist_[v];
  std::vector<std::vector<VertexId>> buckets(static_cast<std::size_t>(n) + 1);
  buckets[static_cast<std::size_t>(n)].push_back(v);
  for (int t = n; t > 0; --t) {
    auto& below = buckets[static_cast<std::size_t>(t - 1)];
    for (VertexId x : buckets[static_cast<std::size_t>(t)]) {
      for (VertexId y : neighbors(x)) {
        if (y != kNoVertex && dist_[y] == t - 1) below.push_back(y);
      }
    }
    std::sort(below.begin(), below.end());
    below.erase(std::unique(below.begin(), below.end()), below.end());
  }
  return buckets;
}

bool Ball::geodesics_contained(VertexId u, VertexId v) const {
  if (is_tube()) return true;
  if (model_.is_free()) return true;
  const int d = distance(u, v);
  return d != kUnreached && dist_[u] + dist_[v] + d <= 2 * depth_;
}

std::vector<std::vector<VertexId>> Ball::interval(VertexId u, VertexId v) const {
  Scratch& s = scratch(0);
  s.begin(size());
  s.set(u, 0);
  std::vector<VertexId> order{u};
  int target = u == v ? 0 : kUnreached;
  for (std::size_t i = 0; i < order.size(); ++i) {
    const VertexId x = order[i];
    const int d = s.get(x);
    if (d >= target) break;
    for (VertexId y : neighbors(x)) {
      if (y != kNoVertex && !s.seen(y)) {
        s.set(y, d + 1);
        order.push_back(y);
        if (y == v) target = d + 1;
      }
    }
  }
  if (target == kUnreached) throw ContainmentError("vertices are not connected inside the region");
  std::vector<std::vector<VertexId>> buckets(static_cast<std::size_t>(target) + 1);
  buckets[static_cast<std::size_t>(target)].push_back(v);
  Scratch& mark = scratch(1);
  mark.begin(size());
  for (int t = target; t > 0; --t) {
    for (VertexId x : buckets[static_cast<std::size_t>(t)]) {
      for (VertexId y : neighbors(x)) {
        if (y != kNoVertex && s.get(y) == t - 1 && !mark.seen(y)) {
          mark.set(y, 0);
          buckets[static_cast<std::size_t>(t - 1)].push_back(y);
        }
      }
    }
  }
  for (auto& b : buckets) std::sort(b.begin(), b.end());
  return buckets;
}

GeodesicSet Ball::geodesics_between(VertexId u, VertexId v, std::size_t cap) const {
  if (!geodesics_contained(u, v)) {
    throw ContainmentError("geodesics between '" + model_.format(word(u)) + "' and '" + model_.format(word(v)) +
                           "' may leave the ball of radius " + std::to_string(depth_));
  }
  const auto buckets = interval(u, v);
  const std::size_t len = buckets.size() - 1;
  auto in_bucket = [&](std::size_t t, VertexId y) {
    return std::binary_search(buckets[t].begin(), buckets[t].end(), y);
  };
  // Number of geodesics from each interval vertex to v.
  std::unordered_map<VertexId, std::uint64_t> ways;
  ways[v] = 1;
  for (std::size_t t = len; t-- > 0;) {
    for (VertexId x : buckets[t]) {
      std::uint64_t total = 0;
      for (VertexId y : neighbors(x)) {
        if (y == kNoVertex || !in_bucket(t + 1, y)) continue;
        const std::uint64_t w = ways[y];
        total = total > std::numeric_limits<std::uint64_t>::max() - w ? std::numeric_limits<std::uint64_t>::max()
                                                                      : total + w;
      }
      ways[x] = total;
    }
  }
  GeodesicSet out;
  out.count = ways[u];
  std::vector<VertexId> path{u};
  // Depth-first in letter order so the first path is the shortlex-least one.
  auto dfs = [&](auto&& self) -> void {
    if (out.paths.size() >= cap) {
      out.truncated = true;
      return;
    }
    const std::size_t t = path.size() - 1;
    if (t == len) {
      out.paths.push_back(GeodesicPath{path});
      return;
    }
    for (VertexId y : neighbors(path.back())) {
      if (y == kNoVertex || !in_bucket(t + 1, y)) continue;
      path.push_back(y);
      self(self);
      path.pop_back();
      if (out.truncated) return;
    }
  };
  dfs(dfs);
  if (out.paths.size() < out.count) out.truncated = true;
  return out;
}

GeodesicPath Ball::some_geodesic(VertexId u, VertexId v) const {
  const auto buckets = interval(u, v);
  GeodesicPath p{{u}};
  for (std::size_t t = 1; t < buckets.size(); ++t) {
    for (VertexId y : neighbors(p.back())) {
      if (y != kNoVertex && std::binary_search(buckets[t].begin(), buckets[t].end(), y)) {
        p.vertices.push_back(y);
        break;
      }
    }
  }
  return p;
}

HalfInt Ball::gromov_product(VertexId x, VertexId y, VertexId z) const {
  const int dzx = distance(z, x);
  const int dzy = distance(z, y);
  const int dxy = distance(x, y);
  if (dzx == kUnreached || dzy == kUnreached || dxy == kUnreached) {
    throw ContainmentError("Gromov product of disconnected vertices");
  }
  return half_of(static_cast<std::int64_t>(dzx) + dzy - dxy);
}

}  // namespace hypstab
