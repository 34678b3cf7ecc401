#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "hypstab/group_model.hpp"
#include "hypstab/word.hpp"

namespace hypstab {

// Circle points are doubles in [0,1).  The real matrix M acts on the line
// through (cos pi x, sin pi x); doubling the line angle identifies this
// with the boundary of the unit disc at angle 2 pi x.

double wrap_unit(double x);
double circle_distance(double a, double b);
/// b - a reduced into (-1/2, 1/2].
double signed_gap(double a, double b);

/// Closed arc starting at `lo` going counterclockwise for `length`.
struct Arc {
  double lo = 0;
  double length = 0;

  bool contains(double x) const;
  /// Strictly inside: both endpoints of `inner` interior to this arc.
  bool strictly_contains(const Arc& inner) const;
  double hi() const { return wrap_unit(lo + length); }
};

struct MobiusGenerator {
  double a = 1, b = 0, c = 0, d = 1;

  /// From the disc form z -> (p z + q) / (conj(q) z + conj(p)).
  static MobiusGenerator from_disc(std::complex<double> p, std::complex<double> q);
  /// Rotation of the circle by `turn` (in circle units).
  static MobiusGenerator rotation(double turn);

  double det() const { return a * d - b * c; }
  double trace() const { return a + d; }
  bool hyperbolic() const { return std::abs(trace()) > 2; }
  /// Throws InvalidInput unless |det - 1| <= tol.
  void validate(double tol = 1e-12) const;

  double apply(double x) const;
  /// Same, for x given as (cos pi x, sin pi x).
  double apply_unit(double c, double s) const;
  MobiusGenerator inverse() const { return {d, -b, -c, a}; }
  MobiusGenerator operator*(const MobiusGenerator& o) const;
  /// Eigen-direction of the larger |eigenvalue|; hyperbolic only.
  double attracting_fixed_point() const;
  double repelling_fixed_point() const { return inverse().attracting_fixed_point(); }
};

/// Strictly increasing PL lift sampled on the uniform grid i/N, with
/// lift(x + 1) = lift(x) + 1 built in.
class CircleHomeo {
 public:
  static CircleHomeo sample(const std::function<double(double)>& f, std::size_t resolution = 1u << 14);
  static CircleHomeo identity(std::size_t resolution = 1u << 14);

  double lift(double x) const;
  double operator()(double x) const { return wrap_unit(lift(x)); }
  CircleHomeo inverse() const;
  std::size_t resolution() const { return y_.size(); }
  bool strictly_monotone() const;
  /// Slope of the PL segment containing x.
  double slope(double x) const;

 private:
  std::vector<double> y_;  // lift at i/N, y_[0] in [0,1)
};

/// x + sum_k amplitude_k sin(2 pi k x + phase_k); a homeomorphism when
/// 2 pi sum k |amplitude_k| < 1.
struct FourierHomeo {
  std::vector<double> amplitude;
  std::vector<double> phase;

  static FourierHomeo sine(double eps) { return {{eps}, {0.0}}; }
  /// Random harmonics 1..3 with sup distance to the identity at most eps.
  static FourierHomeo random(double eps, std::uint64_t seed);

  void validate() const;
  double operator()(double x) const;
  double inverse(double y) const;
  /// Largest circle distance to the identity over a grid.
  double sup_distance(std::size_t grid = 4096) const;
};

enum class CircleSpecKind { Schottky, Fuchsian };

struct CircleSpec {
  CircleSpecKind kind = CircleSpecKind::Schottky;
  GroupModel model = GroupModel::free_group(2);
  std::vector<MobiusGenerator> generators;  // generator i + 1
  std::vector<Arc> pads;                    // Schottky: indexed by letter rank

  /// Rank-2 Schottky group: pads of half-width `pad_half_width` centred at
  /// 0, 1/4, 1/2, 3/4; each generator maps the complement of the inverse
  /// pad onto an arc of half-width `map_half_width`.
  static CircleSpec schottky(double pad_half_width = 0.1, double map_half_width = 0.08);
  /// Side pairings of the regular octagon with angles pi/4, arranged so
  /// that [a1,b1][a2,b2] = 1.
  static CircleSpec fuchsian_genus2();

  /// Throws InvalidInput / HypothesisError on determinant, relator,
  /// pad overlap or ping-pong failure.
  void validate() const;
  MobiusGenerator matrix(Letter x) const;
};

/// An action of the spec's group on the circle.  Letters act by
/// post o M_x o pre (conjugation) or by noise_x o M_x (per-generator noise).
class CircleAction {
 public:
  static CircleAction standard(const CircleSpec& spec);

  CircleAction conjugated(const FourierHomeo& phi) const;
  /// Per-generator noise; free groups only.  HypothesisError when the pads
  /// stop ping-ponging.
  CircleAction with_noise(double eps, std::uint64_t seed) const;

  const CircleSpec& spec() const { return spec_; }
  double apply(Letter x, double p) const;
  /// rho(w)(p): the last letter acts first.
  double apply_word(const Word& w, double p) const;

  /// Fast path for conjugation-type actions: rho(w) = leave o M_w o enter.
  bool letterwise() const { return !noise_.empty(); }
  double enter(double x) const;
  double leave(double u) const;
  MobiusGenerator word_matrix(const Word& w) const;

  /// Checks rho(x)(complement of pad(x^-1)) strictly inside pad(x).
  bool ping_pong() const;
  Arc image(Letter x, const Arc& arc) const;
  /// max over generators (both signs) and grid of distance to `other`.
  double generator_distance(const CircleAction& other, std::size_t grid = 4096) const;

 private:
  CircleSpec spec_;
  std::optional<FourierHomeo> conj_;
  std::vector<FourierHomeo> noise_;  // by letter rank of positive letters
};

std::vector<CircleHomeo> sample_generators(const CircleAction& action, std::size_t resolution = 1u << 14);

struct FixedPoint {
  double x = 0;
  double slope_left = 0;   // secant slopes on [x - r, x] and [x, x + r]
  double slope_right = 0;
};

/// Attracting fixed point of a circle map: iteration from a grid of seeds,
/// refined by bisection on f(x) - x.  Throws DomainError if none.
FixedPoint attracting_fixed_point(const std::function<double(double)>& f, double radius = 1e-4);
FixedPoint attracting_fixed_point(const CircleHomeo& h);

/// Reduced words of length 1..max_length, shortlex order; cyclically
/// reduced only when requested.
std::vector<Word> reduced_words(int num_generators, int max_length, bool cyclic = false);

/// Monotone degree-one map stored as matched pairs with monotone cubic
/// interpolation between them (flat where consecutive images agree).
class SemiConjugacy {
 public:
  SemiConjugacy() = default;
  SemiConjugacy(std::vector<double> xs, std::vector<double> ys);

  double operator()(double x) const;
  const std::vector<double>& xs() const { return xs_; }
  /// Lifted images: nondecreasing, last <= first + 1.
  const std::vector<double>& ys() const { return ys_; }
  bool monotone() const;
  bool degree_one() const;

  std::size_t matched = 0;
  std::size_t discarded = 0;  // pairs breaking the cyclic order
  std::size_t words = 0;      // words with certified fixed points in both actions

 private:
  std::size_t locate(double x) const;
  std::vector<double> xs_, ys_;
  std::vector<double> x_, y_, m_;  // periodic extension, slopes
  std::vector<std::uint32_t> bucket_;
};

struct SemiConjugacyOptions {
  int word_length_cap = 6;
  double contraction = 0.9;
  std::size_t min_pairs = 16;
};

/// h with h o rho = rho0 o h, from attracting fixed points of matching words.
SemiConjugacy build_semiconjugacy(const CircleAction& rho0, const CircleAction& rho,
                                  const SemiConjugacyOptions& options = {});

struct SemiConjugacyReport {
  double defect = 0;                // max distance(h(rho(g) x), rho0(g) h(x))
  double distance_to_identity = 0;  // sup over the points
  bool monotone = false;
  bool degree_one = false;
  std::size_t words = 0;
  std::size_t points = 0;
};

SemiConjugacyReport verify_semiconjugacy(const SemiConjugacy& h, const CircleAction& rho0, const CircleAction& rho,
                                         const std::vector<Word>& words, const std::vector<double>& points);
SemiConjugacyReport verify_semiconjugacy(const SemiConjugacy& h, const CircleAction& rho0, const CircleAction& rho,
                                         const std::vector<Word>& words, std::size_t grid);

/// Depth-n covers of the limit set: depth 1 is the pads; depth n the arcs
/// rho(v_1 ... v_{n-1})(pad(v_n)) over reduced words v.  Throws
/// HypothesisError when an arc is not strictly inside its parent.
struct MinimalSetCover {
  std::vector<std::vector<Arc>> depth;  // depth[0] = pads
  std::vector<double> total_length;
};
MinimalSetCover minimal_set(const CircleAction& action, int depth);

/// Points rho(w)(fix+ rho(last letter of w)) over reduced words of length n:
/// exact points of the minimal set.
std::vector<double> minimal_set_sample(const CircleAction& action, int n);

}  // namespace hypstab
