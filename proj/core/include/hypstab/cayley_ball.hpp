#pragma once

#include <cstdint>
#include <limits>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <unordered_map>
#include <vector>

#include "hypstab/group_model.hpp"
#include "hypstab/half_int.hpp"
#include "hypstab/su11.hpp"
#include "hypstab/word.hpp"

namespace hypstab {

using VertexId = std::uint32_t;
inline constexpr VertexId kNoVertex = std::numeric_limits<VertexId>::max();
inline constexpr int kUnreached = std::numeric_limits<int>::max();

namespace detail {

/// Open-addressing multimap from 64-bit keys to vertex ids.
class KeyIndex {
 public:
  void insert(std::uint64_t key, VertexId id);
  template <class F>
  VertexId find_if(std::uint64_t key, F&& accept) const {
    if (slots_.empty()) return kNoVertex;
    for (std::size_t i = home(key);; i = (i + 1) & mask_) {
      const auto& [k, v] = slots_[i];
      if (v == kNoVertex) return kNoVertex;
      if (k == key && accept(v)) return v;
    }
  }

 private:
  std::size_t home(std::uint64_t key) const {
    return static_cast<std::size_t>((key * 0x9e3779b97f4a7c15ULL) >> shift_) & mask_;
  }
  void rehash(std::size_t capacity);

  std::vector<std::pair<std::uint64_t, VertexId>> slots_;
  std::size_t mask_ = 0;
  int shift_ = 64;
  std::size_t used_ = 0;
};

}  // namespace detail

/// Ordered list of adjacent vertices realizing a graph geodesic.
struct GeodesicPath {
  std::vector<VertexId> vertices;
  std::size_t length() const { return vertices.empty() ? 0 : vertices.size() - 1; }
  VertexId front() const { return vertices.front(); }
  VertexId back() const { return vertices.back(); }
  friend bool operator==(const GeodesicPath&, const GeodesicPath&) = default;
};

struct GeodesicSet {
  std::vector<GeodesicPath> paths;
  /// Exact number of geodesics (saturating at uint64 max).
  std::uint64_t count = 0;
  bool truncated = false;
};

struct BuildOptions {
  std::size_t max_vertices = 4'000'000;
  /// Tubes only: extra anchor search span for seed paths that are not
  /// geodesic (seeds i, j may be closer than |i - j|).  A path whose
  /// backtracking shortcuts are at most s needs slack s.
  int anchor_slack = 0;
};

/// A finite connected piece of the Cayley graph: every vertex within
/// `depth` of a seed set.  With the single seed e this is the ball B_r(e);
/// with the prefixes of a geodesic word as seeds it is a tube around that
/// geodesic.  Vertices carry a representative word (for balls, the
/// shortlex-least geodesic word) and adjacency indexed by letter.
///
/// A built region is immutable; the distance memo is internally locked.
class Ball {
 public:
  const GroupModel& model() const { return model_; }
  /// Radius for balls, thickness for tubes.
  int radius() const { return depth_; }
  bool is_tube() const { return seeds_.size() > 1; }
  std::size_t size() const { return anchor_.size(); }
  VertexId origin() const { return 0; }
  /// Seed vertices: {e} for a ball, the path prefixes for a tube.
  std::size_t num_seeds() const { return seeds_.size(); }
  VertexId seed(std::size_t i) const { return static_cast<VertexId>(seeds_[i]); }
  const Word& seed_path() const { return path_; }

  /// Distance to the seed set (= word length for balls).
  int dist_origin(VertexId v) const { return dist_[v]; }
  VertexId neighbor(VertexId v, Letter x) const {
    return adjacency_[static_cast<std::size_t>(v) * static_cast<std::size_t>(degree_) +
                      static_cast<std::size_t>(letter_rank(x))];
  }
  std::span<const VertexId> neighbors(VertexId v) const {
    return {adjacency_.data() + static_cast<std::size_t>(v) * static_cast<std::size_t>(degree_),
            static_cast<std::size_t>(degree_)};
  }
  /// Representative word of the group element at v (normal form for balls).
  Word word(VertexId v) const;
  /// Number of vertices at each distance from the seed set.
  std::vector<std::size_t> sphere_sizes() const;

  /// Vertex representing the element of `w`, if it lies in the region.
  std::optional<VertexId> find(const Word& w) const;
  VertexId at(const Word& w) const;  // throws ContainmentError
  /// Vertex reached by right-multiplying v by w, if the walk target is in the
  /// region (found by key lookup, the walk itself may leave the region).
  std::optional<VertexId> translate(VertexId v, const Word& w) const;

  /// Exact graph distance inside the region (two-sided BFS).
  int distance(VertexId u, VertexId v) const;
  /// Graph distances from `source` to every vertex; memoized.
  std::shared_ptr<const std::vector<int>> distances_from(VertexId source) const;
  /// Same as distances_from with values saturated at 255; a larger cache
  /// is kept for these since they are a quarter of the size.
  std::shared_ptr<const std::vector<std::uint8_t>> compact_distances_from(VertexId source) const;
  std::vector<int> multi_source_distances(std::span<const VertexId> sources, int max_depth = kUnreached) const;
  /// Vertices within graph distance `r` of v together with distances.
  /// `touched_frontier` is set when the search reached a vertex of maximal
  /// depth before exhausting r (the true neighborhood may be larger).
  std::vector<std::pair<VertexId, int>> neighborhood(VertexId v, int r, bool* touched_frontier = nullptr) const;

  /// Distance in the whole Cayley graph, computed as |u^-1 v| by locating
  /// u^-1 v in a ball.  Exact whenever the value is <= radius; nullopt
  /// when larger.  Free groups: always exact.  Only valid on balls.
  std::optional<int> group_distance(VertexId u, VertexId v) const;
  /// Vertex of the element u^-1 v, when it lies in the ball.
  std::optional<VertexId> relative(VertexId u, VertexId v) const;
  /// Geodesics from e to v, as vertex buckets by length (walks down the
  /// dist_origin gradient; every such geodesic lies in the ball).
  std::vector<std::vector<VertexId>> interval_from_origin(VertexId v) const;

  /// True when every geodesic of the Cayley graph between u and v provably
  /// lies in this ball, so graph geodesics here are genuine geodesics.
  bool geodesics_contained(VertexId u, VertexId v) const;

  /// Vertices on some geodesic from u to v, bucketed by distance from u.
  std::vector<std::vector<VertexId>> interval(VertexId u, VertexId v) const;
  GeodesicSet geodesics_between(VertexId u, VertexId v, std::size_t cap = 10'000) const;
  /// Shortlex-least geodesic (letters compared by rank at each step).
  GeodesicPath some_geodesic(VertexId u, VertexId v) const;

  HalfInt gromov_product(VertexId x, VertexId y, VertexId z) const;

 private:
  friend Ball build_ball(const GroupModel&, int, const BuildOptions&);
  friend Ball build_tube(const GroupModel&, const Word&, int, const BuildOptions&);

  Ball(GroupModel model, int depth);
  void grow(const BuildOptions& options);
  // Candidate element given by (anchor, local word, local matrix); returns
  // the existing vertex or kNoVertex.
  VertexId lookup(int anchor, const Word& local, const Su11& mat) const;
  VertexId lookup_global(const Word& w) const;
  std::uint64_t key_of(const Word& local, const Su11& mat) const;
  Word relative_seed_word(int from, int to) const;

  GroupModel model_;
  int depth_;
  int span_ = 0;
  int degree_;
  std::vector<Su11> gens_;  // surface groups only
  Word path_;               // seeds are the prefixes path_[0..i)
  std::vector<int> seeds_;  // seed vertex ids in path order
  std::vector<int> anchor_;
  std::vector<Word> local_;
  std::vector<Su11> mat_;
  std::vector<int> dist_;
  std::vector<VertexId> adjacency_;
  detail::KeyIndex index_;

  struct Memo {
    std::mutex mu;
    std::unordered_map<VertexId, std::shared_ptr<const std::vector<int>>> entries;
    std::unordered_map<VertexId, std::shared_ptr<const std::vector<std::uint8_t>>> rows8;
  };
  std::shared_ptr<Memo> memo_ = std::make_shared<Memo>();
};

/// Breadth-first construction of B_r(e).
Ball build_ball(const GroupModel& model, int radius, const BuildOptions& options = {});
/// All vertices within `thickness` of the prefixes of `path` (which must be
/// a geodesic word).  Vertex 0 is e; seed i is the prefix of length i.
Ball build_tube(const GroupModel& model, const Word& path, int thickness, const BuildOptions& options = {});

}  // namespace hypstab
