#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <utility>
#include <vector>

#include "hypstab/boundary.hpp"
#include "hypstab/cayley_ball.hpp"
#include "hypstab/half_int.hpp"

namespace hypstab {

/// Coarse projection of a boundary triple at finite resolution: region
/// vertices within closed distance r - 1 of every geodesic between the
/// depth-truncations of the three points (closed neighbourhoods, so that
/// pi_1 is the intersection of the geodesic vertex sets).
struct ProjectionResult {
  std::vector<VertexId> vertices;  // sorted
  HalfInt r;
  int depth = 0;
  /// Some rejected vertex sits so close to the region boundary that paths
  /// leaving the region might have put it within r - 1 of every geodesic.
  bool truncated = false;
};

/// Largest depth for which every geodesic between truncations provably
/// stays in the ball: radius - 2 for free groups, radius / 2 otherwise.
int default_projection_depth(const Ball& ball);

/// Geodesic DAG between two vertices: nodes layered by distance from the
/// start, each with the indices of its predecessors.
struct GeodesicDag {
  std::vector<VertexId> nodes;
  std::vector<std::vector<std::uint32_t>> preds;
};

/// Projection queries at a fixed depth, caching the geodesic DAGs between
/// truncations.  Not thread-safe.
class ProjectionEngine {
 public:
  ProjectionEngine(const Ball& ball, int depth);

  /// Throws ContainmentError if a truncation or a geodesic between two
  /// truncations may leave the ball.
  ProjectionResult project(const Triple& t, HalfInt r);
  /// Membership of a single vertex; same preconditions.
  bool contains(const Triple& t, HalfInt r, VertexId x);
  int depth() const { return depth_; }

 private:
  const GeodesicDag& dag(VertexId u, VertexId v);
  VertexId truncation(const BoundaryPoint& p);

  const Ball& ball_;
  int depth_;
  std::map<std::pair<VertexId, VertexId>, GeodesicDag> dags_;
};

ProjectionResult coarse_projection(const Ball& ball, const Triple& t, HalfInt r, int depth);
bool projection_contains(const Ball& ball, const Triple& t, HalfInt r, int depth, VertexId x);

/// Diameter of a vertex set in the region's graph metric.  Exact
/// (lower == upper) unless the search needed more than `max_searches`
/// breadth-first searches; the upper bound is always valid.
struct DiameterBounds {
  int lower = 0;
  int upper = 0;
  bool exact() const { return lower == upper; }
};
DiameterBounds vertex_set_diameter(const Ball& ball, std::span<const VertexId> vertices, int max_searches = 64);

struct DiameterReport {
  int q_emp = 0;               // max diameter (upper bounds) over nonempty projections
  std::size_t triples = 0;
  std::size_t empty = 0;       // excluded from the max
  std::size_t truncated = 0;   // projections flagged truncated
  std::size_t inexact = 0;     // diameters known only up to bounds
  std::vector<int> diameters;  // per triple upper bound, -1 when empty
};

DiameterReport projection_diameter(const Ball& ball, std::span<const Triple> triples, HalfInt r, int depth);

/// Indices of the triples whose projection contains v.
std::vector<std::size_t> vertex_preimage(const Ball& ball, VertexId v, HalfInt r, std::span<const Triple> triples,
                                         int depth);

/// Diameter (upper bound) of the union of the projections of the given triples.
int union_diameter(const Ball& ball, std::span<const Triple> triples, std::span<const std::size_t> which, HalfInt r,
                   int depth);

/// Random triples of pairwise distinct boundary points.  Distinctness is
/// decided by stabilized products at `depth` with slack nu.
std::vector<Triple> sample_triples(const Ball& ball, std::size_t count, std::uint64_t seed, int depth, HalfInt nu);

struct ConstantsLedger {
  HalfInt delta;
  int q_of_3delta = 0;
  int h = 0;
  int diam_pi_d0 = 0;
  int c_v = 0;
  int r = 0;
};

/// H = max{2 delta, Q(3 delta)} + 1 and the smallest integer
/// R > max{24H + 52 delta + diam, C_V + 4H + 11 delta}.
ConstantsLedger build_ledger(HalfInt delta, int q_of_3delta, int diam_pi_d0, int c_v);

}  // namespace hypstab
