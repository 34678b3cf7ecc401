#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hypstab/cayley_ball.hpp"
#include "hypstab/half_int.hpp"

namespace hypstab {

/// How a scan chooses its instances: exhaustive when the candidate vertex
/// set has at most `exhaustive_limit` elements, otherwise `samples` draws
/// from a generator seeded with `seed`.
struct SampleSpec {
  std::size_t exhaustive_limit = 5000;
  std::size_t samples = 20000;
  std::uint64_t seed = 1;

  void validate() const;
};

/// Largest distance between two points with the same image in the
/// comparison tripod, over every choice of geodesic sides, at the corner e
/// of the triangle (e, y, z).  Only the e-corner is measured.
HalfInt corner_defect(const Ball& ball, VertexId y, VertexId z);
/// Thinness defect of the triangle (x, y, z), all three corners, all
/// geodesic choices.  Uses translation to move each corner to e.
HalfInt triangle_defect(const Ball& ball, VertexId x, VertexId y, VertexId z);

/// Thin-triangle constant at ball scale: maximum triangle defect over
/// triangles (e, y, z) with |y|, |z| <= inner.  Every geodesic triangle
/// whose two sides at some vertex have length <= inner is a translate of
/// one of these.  Requires inner <= radius/2.
HalfInt thin_constant(const Ball& ball, int inner, const SampleSpec& sample = {});

/// Four-point constant: maximum of min{<a,c>_e, <b,c>_e} - <a,b>_e over
/// a, b, c in B_inner (clamped at 0).  Base point e covers all base points
/// by translation.
HalfInt four_point_delta(const Ball& ball, int inner, const SampleSpec& sample = {});

struct Violation {
  std::string property;  // "delta1", "delta3", "delta4", "delta5"
  std::string detail;
  HalfInt measured;
  HalfInt bound;
};

struct HyperbolicityCertificate {
  int ball_radius = 0;
  int inner_radius = 0;
  HalfInt nu_thin;
  HalfInt delta4;
  HalfInt delta_certified;
  std::size_t triangles_checked = 0;
  std::size_t quadruples_checked = 0;
  std::size_t delta4_points_checked = 0;
  std::size_t delta5_points_checked = 0;
  std::vector<Violation> violations;

  bool ok() const { return violations.empty(); }
};

struct CertifyOptions {
  int inner = -1;  // default: radius / 2
  SampleSpec sample{};
  /// Periods used to build the pool of boundary points for the projection
  /// checks; empty selects a default per model.
  std::vector<Word> periods;
  /// Truncation depth for projections; -1 selects default_projection_depth.
  int depth = -1;
  /// Number of boundary pairs (a, b) whose connecting geodesics are checked.
  std::size_t delta5_pairs = 12;
  std::size_t max_violations = 32;
};

/// Checks, at ball scale and for the given candidate delta: thin triangles,
/// the Gromov-product inequality, surjectivity of the coarse projection
/// (every vertex near e lies in the projection of some boundary triple) and
/// that projections of triples (a, b, *) cover the geodesics from a to b.
/// Failures are recorded, never thrown.
HyperbolicityCertificate certify_delta(const Ball& ball, HalfInt candidate, const CertifyOptions& options = {});

struct RayProductReport {
  HalfInt max_violation;  // max of <a,b>_p - 2nu - <c,d>_p; <= 0 means the bound holds
  std::size_t pairs_checked = 0;
  bool pass = true;
};

/// For every a before c on ray A and b before d on ray B checks
/// <c,d>_p >= <a,b>_p - 2 nu.  Both rays must start at p.
RayProductReport ray_product_bound_check(const Ball& ball, VertexId p, const GeodesicPath& ray_a,
                                         const GeodesicPath& ray_b, HalfInt nu);

/// Distance used by the scans: exact Cayley-graph distance via group_distance
/// on balls when it is at most the radius, graph distance otherwise.
int scan_distance(const Ball& ball, VertexId u, VertexId v);

}  // namespace hypstab
