#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <utility>
#include <vector>

#include "hypstab/cayley_ball.hpp"
#include "hypstab/half_int.hpp"

namespace hypstab {

/// Concatenation of geodesic segments p_0 -> p_1 -> ... -> p_k.
struct PiecewiseGeodesic {
  std::vector<VertexId> breakpoints;
  std::vector<GeodesicPath> segments;

  /// Joins consecutive breakpoints by shortlex-least geodesics.
  static PiecewiseGeodesic through(const Ball& ball, std::vector<VertexId> breakpoints);
  /// Throws InvalidInput unless k >= 1 and every segment is a geodesic of
  /// the region joining its breakpoints.
  void validate(const Ball& ball) const;
  /// All vertices of all segments, in order, shared breakpoints once.
  std::vector<VertexId> vertices() const;
};

/// <p_{i-1}, p_{i+1}>_{p_i} for 1 <= i <= k-1.
std::vector<HalfInt> corner_products(const PiecewiseGeodesic& pw, const Ball& ball);

struct BrokenGeodesicVerdict {
  bool segments_long = false;  // every segment longer than 2l + 8 delta
  bool corners_small = false;  // every corner product at most l
  int min_segment = 0;
  HalfInt max_corner;
  int hausdorff = 0;           // between pw and a geodesic joining its ends
  HalfInt bound;               // l + 4 delta
  bool pass = false;

  bool hypotheses() const { return segments_long && corners_small; }
};

/// Hausdorff distance between two vertex sets, distances in the region.
int hausdorff_distance(const Ball& ball, std::span<const VertexId> a, std::span<const VertexId> b);

BrokenGeodesicVerdict check_broken_geodesic(const PiecewiseGeodesic& pw, HalfInt l, HalfInt delta,
                                            const Ball& ball);

/// Randomized scan of the broken-geodesic bound.  Each round draws a long
/// word made of geodesic segments whose junctions backtrack up to
/// `max_backtrack` letters, builds a tube around it, and checks every
/// sub-chain of at least two segments with l set to its largest corner.
struct BrokenScanOptions {
  int segments = 12;
  int min_length = 0;  // 0: 2 * max_backtrack + 8 delta + 1
  int length_spread = 12;
  int max_backtrack = 2;
  int thickness = 3;
  std::size_t instances = 500;
  std::size_t max_rounds = 200;
  std::uint64_t seed = 1;
};

struct BrokenScanReport {
  std::size_t instances = 0;  // hypothesis-satisfying instances checked
  std::size_t rejected = 0;   // sub-chains whose segments are too short for their l
  std::size_t failures = 0;   // Hausdorff above l + 4 delta
  std::size_t rounds = 0;
  int max_hausdorff = 0;
  HalfInt max_l;
  HalfInt max_slack_used;     // largest Hausdorff - (l + 4 delta), <= 0 when all pass
};

BrokenScanReport broken_geodesic_scan(const GroupModel& model, HalfInt delta, const BrokenScanOptions& options = {});

/// Maximal r-connected subsets of S (pairs at distance <= r are joined).
/// Components are sorted, and ordered by their least vertex.
std::vector<std::vector<VertexId>> r_connected_components(std::span<const VertexId> s, double r,
                                                          const Ball& ball);

/// Coarse geodesic data: S with one geodesic window per point.  Windows are
/// stored once and shared, `window_of[s]` indexes `windows`.
struct CoarseGeodesicData {
  std::vector<VertexId> s;
  std::vector<GeodesicPath> windows;
  std::map<VertexId, std::size_t> window_of;
  int h = 1;
  int r = 0;

  const GeodesicPath& gamma(VertexId v) const { return windows.at(window_of.at(v)); }
  /// Throws HypothesisError naming the first violated invariant.
  void validate(const Ball& ball) const;
};

/// Axis-derived data inside a tube around w^n: the axis window is the seed
/// path, S picks one random vertex within h of each axis vertex, or takes
/// all of N_h(axis) when `all_neighbors` is set.
CoarseGeodesicData axis_coarse_data(const Ball& tube, int h, int r, std::uint64_t seed, bool all_neighbors = false);

struct ChainEstimates {
  int max_step = 0;             // max d(s_i, s_{i+1}); bound R/2 + 2H
  HalfInt max_corner;           // max <s_{i-1}, s_{i+1}>_{s_i}; bound 5H
  int min_seed_step = 0;        // min d(s_0, s_{+-1}); bound R/2 - 2H
  HalfInt seed_corner;          // <s_{-1}, s_1>_{s_0}; bound 3H
  bool steps_ok = false;
  bool corners_ok = false;
  bool seed_ok = false;
};

struct ReconstructionResult {
  std::vector<VertexId> chain;
  std::size_t origin_index = 0;  // position of s_0 in chain
  PiecewiseGeodesic path;
  GeodesicPath limit_geodesic;
  HalfInt hausdorff_to_s;
  std::pair<HalfInt, HalfInt> endpoint_products;  // (- side, + side) lower bounds
  HalfInt hausdorff_bound;                        // 3H + 6 delta
  HalfInt product_bound;                          // R - (4H + 10 delta) - 2 nu
  ChainEstimates estimates;
  bool hausdorff_ok = false;
  bool products_ok = false;
  bool shadowing_ok = false;  // hausdorff + 1/2 < 3H + 6 delta + 1

  bool pass() const {
    return hausdorff_ok && products_ok && shadowing_ok && estimates.steps_ok && estimates.corners_ok &&
           estimates.seed_ok;
  }
};

/// Builds the chain s_i by walking R/2 along the local geodesics, starting
/// from the point of S nearest the region centre.  Refuses to run unless
/// R > 24H + 16 delta.
ReconstructionResult reconstruct(const CoarseGeodesicData& data, HalfInt delta, HalfInt nu, const Ball& ball);

}  // namespace hypstab
