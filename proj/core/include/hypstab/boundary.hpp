#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <string_view>

#include "hypstab/cayley_ball.hpp"
#include "hypstab/half_int.hpp"

namespace hypstab {

/// Eventually periodic geodesic ray from e: the infinite word
/// prefix . period . period . ...
class BoundaryPoint {
 public:
  BoundaryPoint() = default;
  /// Checks reducedness of the infinite word and that the period is
  /// nontrivial; geodesicity is checked separately by `verify`.
  BoundaryPoint(const GroupModel& model, Word prefix, Word period);

  /// Literal "prefix|period", e.g. "|a" or "a|b" or "a1 b1|A2".
  static BoundaryPoint parse(const GroupModel& model, std::string_view literal);

  const Word& prefix() const { return prefix_; }
  const Word& period() const { return period_; }
  /// Length-n prefix of the infinite word.
  Word truncate(std::size_t n) const;
  std::string str(const GroupModel& model) const;

  /// Throws InvalidInput unless truncate(n) is geodesic for every n <= depth.
  /// Uses the ball for n <= radius and tube word lengths beyond that.
  void verify(const Ball& ball, int depth) const;
  /// Same, model only (free: reducedness; surface: tube word length).
  void verify(const GroupModel& model, int depth) const;

  friend bool operator==(const BoundaryPoint&, const BoundaryPoint&) = default;

 private:
  Word prefix_;
  Word period_;
};

/// Closed interval of Gromov products at infinity.
struct ProductInterval {
  HalfInt lo;
  HalfInt hi;
  /// Largest truncation product seen and the depth where it was first reached.
  HalfInt max_truncation_product;
  int stabilized_at = 0;
  /// Truncations fellow-travel to the full depth: the points cannot be told
  /// apart at this resolution.
  bool not_distinct = false;
};

/// Products of truncations a_i, b_j (i, j <= depth) at p give the lower bound
/// <alpha, beta>_p >= <a_i, b_j>_p - 2 nu.  Returns [M - 2nu, M] with M the
/// largest truncation product (lower end clamped at 0).  PrecisionError when
/// M still grows at the last depth for points that are not fellow-travelling.
ProductInterval gromov_product_infinity(const Ball& ball, VertexId p, const BoundaryPoint& alpha,
                                        const BoundaryPoint& beta, int depth, HalfInt nu);

struct VisualMetricParams {
  double lambda = 2.0;
  double k1 = 1.0;
  double k2 = 1.0;
  int depth = 8;

  void validate() const;
};

struct DistanceInterval {
  double lo = 0;
  double hi = 0;
  double mid() const { return 0.5 * (lo + hi); }
};

/// [k1 lambda^-(hi), k2 lambda^-(lo)] for a product interval [lo, hi].
DistanceInterval visual_distance(const VisualMetricParams& params, const ProductInterval& product);

struct Triple {
  BoundaryPoint a;
  BoundaryPoint b;
  BoundaryPoint c;
};

struct MinsepResult {
  double value = 0;        // minimum of the three working distances
  double uncertainty = 0;  // largest half-width among the three intervals
};

/// Products at e with truncation depth params.depth.  DomainError when two
/// of the points are not distinct at that depth.
MinsepResult minsep(const Ball& ball, const Triple& t, const VisualMetricParams& params, HalfInt nu);

/// Random boundary point: prefix of length <= max_prefix, cyclically reduced
/// period of length 1..max_period, rejected until truncations up to
/// `verify_depth` are geodesic in the ball.
BoundaryPoint random_boundary_point(const Ball& ball, std::mt19937_64& rng, int max_prefix, int max_period,
                                    int verify_depth);

/// Geodesic test for a word: free groups check reducedness; surface groups
/// compare the distance between the ends of a tube of the given thickness
/// around the word with its length.
bool is_geodesic_word(const GroupModel& model, const Word& w, int thickness = 3);

}  // namespace hypstab
