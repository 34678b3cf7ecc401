#include "hypstab/circle.hpp"

#include <algorithm>
#include <numbers>
#include <random>
#include <string>

#include "hypstab/errors.hpp"

namespace hypstab {

namespace {
constexpr double kPi = std::numbers::pi;
}

double wrap_unit(double x) {
  const double y = x - std::floor(x);
  return y >= 1.0 ? 0.0 : y;
}

double signed_gap(double a, double b) {
  const double d = b - a;
  return d - std::floor(d + 0.5);
}

double circle_distance(double a, double b) { return std::abs(signed_gap(a, b)); }

bool Arc::contains(double x) const { return wrap_unit(x - lo) <= length; }

bool Arc::strictly_contains(const Arc& inner) const {
  const double s = wrap_unit(inner.lo - lo);
  return s > 0 && s + inner.length < length;
}

// ---------------------------------------------------------------------------

MobiusGenerator MobiusGenerator::from_disc(std::complex<double> p, std::complex<double> q) {
  const auto sum = p + q;
  const auto diff = p - q;
  return {sum.real(), -diff.imag(), sum.imag(), diff.real()};
}

MobiusGenerator MobiusGenerator::rotation(double turn) {
  return {std::cos(kPi * turn), -std::sin(kPi * turn), std::sin(kPi * turn), std::cos(kPi * turn)};
}

void MobiusGenerator::validate(double tol) const {
  if (!(std::abs(det() - 1) <= tol)) throw InvalidInput("Mobius generator has determinant " + std::to_string(det()));
}

double MobiusGenerator::apply_unit(double cx, double sx) const {
  return wrap_unit(std::atan2(c * cx + d * sx, a * cx + b * sx) / kPi);
}

double MobiusGenerator::apply(double x) const { return apply_unit(std::cos(kPi * x), std::sin(kPi * x)); }

MobiusGenerator MobiusGenerator::operator*(const MobiusGenerator& o) const {
  return {a * o.a + b * o.c, a * o.b + b * o.d, c * o.a + d * o.c, c * o.b + d * o.d};
}

double MobiusGenerator::attracting_fixed_point() const {
  if (!hyperbolic()) throw DomainError("Mobius map is not hyperbolic");
  const double tr = trace();
  const double l = tr / 2 + std::copysign(std::sqrt(tr * tr / 4 - 1), tr);
  // Two expressions for the eigenvector; take the better conditioned one.
  const double x1 = b, y1 = l - a;
  const double x2 = l - d, y2 = c;
  const bool first = std::hypot(x1, y1) >= std::hypot(x2, y2);
  return wrap_unit(std::atan2(first ? y1 : y2, first ? x1 : x2) / kPi);
}

// ---------------------------------------------------------------------------

CircleHomeo CircleHomeo::sample(const std::function<double(double)>& f, std::size_t resolution) {
  if (resolution < 2) throw InvalidInput("circle homeomorphism needs at least 2 breakpoints");
  CircleHomeo h;
  h.y_.resize(resolution);
  const double n = static_cast<double>(resolution);
  h.y_[0] = wrap_unit(f(0.0));
  for (std::size_t i = 1; i < resolution; ++i) {
    const double prev = h.y_[i - 1];
    h.y_[i] = prev + wrap_unit(f(static_cast<double>(i) / n) - prev);
  }
  if (!h.strictly_monotone()) throw InvalidInput("sampled map is not a monotone degree-one homeomorphism");
  return h;
}

CircleHomeo CircleHomeo::identity(std::size_t resolution) {
  return sample([](double x) { return x; }, resolution);
}

double CircleHomeo::lift(double x) const {
  const double fl = std::floor(x);
  const double n = static_cast<double>(y_.size());
  const double t = (x - fl) * n;
  auto i = static_cast<std::size_t>(t);
  if (i >= y_.size()) i = y_.size() - 1;
  const double frac = t - static_cast<double>(i);
  const double next = i + 1 < y_.size() ? y_[i + 1] : y_[0] + 1;
  return fl + y_[i] + frac * (next - y_[i]);
}

double CircleHomeo::slope(double x) const {
  const double n = static_cast<double>(y_.size());
  auto i = static_cast<std::size_t>(wrap_unit(x) * n);
  if (i >= y_.size()) i = y_.size() - 1;
  const double next = i + 1 < y_.size() ? y_[i + 1] : y_[0] + 1;
  return (next - y_[i]) * n;
}

bool CircleHomeo::strictly_monotone() const {
  for (std::size_t i = 1; i < y_.size(); ++i)
    if (!(y_[i] > y_[i - 1])) return false;
  return y_.back() < y_.front() + 1;
}

CircleHomeo CircleHomeo::inverse() const {
  const double n = static_cast<double>(y_.size());
  auto inv = [&](double t) {
    // Lifted value in [y_0, y_0 + 1), then locate its segment.
    double v = wrap_unit(t);
    if (v < y_[0]) v += 1;
    const auto it = std::upper_bound(y_.begin(), y_.end(), v);
    const auto i = static_cast<std::size_t>(it - y_.begin()) - 1;
    const double next = i + 1 < y_.size() ? y_[i + 1] : y_[0] + 1;
    return wrap_unit((static_cast<double>(i) + (v - y_[i]) / (next - y_[i])) / n);
  };
  return sample(inv, y_.size());
}

// ---------------------------------------------------------------------------

FourierHomeo FourierHomeo::random(double eps, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> weight(0.2, 1.0);
  std::uniform_real_distribution<double> angle(0.0, 2 * kPi);
  FourierHomeo f;
  double total = 0;
  for (int k = 0; k < 3; ++k) {
    f.amplitude.push_back(weight(rng));
    f.phase.push_back(angle(rng));
    total += f.amplitude.back();
  }
  for (double& a : f.amplitude) a *= eps / total;
  f.validate();
  return f;
}

void FourierHomeo::validate() const {
  if (amplitude.size() != phase.size()) throw InvalidInput("Fourier homeomorphism needs one phase per amplitude");
  double slope = 0;
  for (std::size_t k = 0; k < amplitude.size(); ++k) slope += 2 * kPi * static_cast<double>(k + 1) * std::abs(amplitude[k]);
  if (!(slope < 1)) throw InvalidInput("Fourier perturbation too large to stay monotone");
}

double FourierHomeo::operator()(double x) const {
  double y = x;
  for (std::size_t k = 0; k < amplitude.size(); ++k)
    y += amplitude[k] * std::sin(2 * kPi * static_cast<double>(k + 1) * x + phase[k]);
  return wrap_unit(y);
}

double FourierHomeo::inverse(double y) const {
  double x = y;
  for (int it = 0; it < 60; ++it) {
    double g = x - y, dg = 1;
    for (std::size_t k = 0; k < amplitude.size(); ++k) {
      const double w = 2 * kPi * static_cast<double>(k + 1);
      g += amplitude[k] * std::sin(w * x + phase[k]);
      dg += amplitude[k] * w * std::cos(w * x + phase[k]);
    }
    const double step = g / dg;
    x -= step;
    if (std::abs(step) < 1e-17) break;
  }
  return wrap_unit(x);
}

double FourierHomeo::sup_distance(std::size_t grid) const {
  double out = 0;
  for (std::size_t i = 0; i < grid; ++i) {
    const double x = static_cast<double>(i) / static_cast<double>(grid);
    out = std::max(out, circle_distance((*this)(x), x));
  }
  return out;
}

// ---------------------------------------------------------------------------

CircleSpec CircleSpec::schottky(double pad_half_width, double map_half_width) {
  if (!(map_half_width > 0 && map_half_width < pad_half_width && pad_half_width < 0.125)) {
    throw InvalidInput("Schottky spec needs 0 < map half-width < pad half-width < 1/8");
  }
  // Translation length chosen so the complement of the pad at 1/2 lands on
  // the arc of half-width map_half_width around 0.
  auto translation = [](double s) { return MobiusGenerator::from_disc(std::cosh(s), std::sinh(s)); };
  double lo = 0, hi = 20;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    (circle_distance(translation(mid).apply(0.5 - pad_half_width), 0.0) > map_half_width ? lo : hi) = mid;
  }
  const auto t = translation(0.5 * (lo + hi));
  CircleSpec spec;
  spec.kind = CircleSpecKind::Schottky;
  spec.model = GroupModel::free_group(2);
  spec.generators = {t, MobiusGenerator::rotation(0.25) * t * MobiusGenerator::rotation(-0.25)};
  for (double centre : {0.0, 0.5, 0.25, 0.75}) spec.pads.push_back({wrap_unit(centre - pad_half_width), 2 * pad_half_width});
  spec.validate();
  return spec;
}

CircleSpec CircleSpec::fuchsian_genus2() {
  const double ch = 1 + std::numbers::sqrt2;
  const auto t = MobiusGenerator::from_disc(ch, std::sqrt(ch * ch - 1));
  // Pairing taking side j of the octagon to side i (side k faces angle k/8).
  auto pairing = [&](int i, int j) {
    return MobiusGenerator::rotation(i / 8.0) * t * MobiusGenerator::rotation((4 - j) / 8.0);
  };
  CircleSpec spec;
  spec.kind = CircleSpecKind::Fuchsian;
  spec.model = GroupModel::surface_group(2);
  spec.generators = {pairing(0, 2), pairing(3, 1), pairing(4, 6), pairing(7, 5)};
  spec.validate();
  return spec;
}

MobiusGenerator CircleSpec::matrix(Letter x) const {
  const auto& g = generators.at(static_cast<std::size_t>(std::abs(x)) - 1);
  return x > 0 ? g : g.inverse();
}

void CircleSpec::validate() const {
  if (static_cast<int>(generators.size()) != model.num_generators()) {
    throw InvalidInput("circle spec needs one matrix per generator");
  }
  for (const auto& g : generators) g.validate(1e-9);
  if (kind == CircleSpecKind::Fuchsian) {
    for (const Word& rel : model.relators()) {
      MobiusGenerator p;
      for (Letter x : rel) p = p * matrix(x);
      const double err = std::min(std::max({std::abs(p.a - 1), std::abs(p.b), std::abs(p.c), std::abs(p.d - 1)}),
                                  std::max({std::abs(p.a + 1), std::abs(p.b), std::abs(p.c), std::abs(p.d + 1)}));
      if (!(err <= 1e-9)) throw InvalidInput("relator image differs from the identity by " + std::to_string(err));
    }
    return;
  }
  if (!model.is_free()) throw InvalidInput("Schottky spec needs a free group model");
  if (pads.size() != static_cast<std::size_t>(model.degree())) throw InvalidInput("Schottky spec needs one pad per letter");
  for (const auto& g : generators)
    if (!g.hyperbolic()) throw InvalidInput("Schottky generator is not hyperbolic");
  for (std::size_t i = 0; i < pads.size(); ++i) {
    for (std::size_t j = 0; j < pads.size(); ++j) {
      if (i != j && (pads[i].contains(pads[j].lo) || pads[i].contains(pads[j].hi()))) {
        throw InvalidInput("Schottky pads overlap");
      }
    }
  }
  if (!CircleAction::standard(*this).ping_pong()) throw HypothesisError("ping-pong", "pads do not ping-pong");
}

// ---------------------------------------------------------------------------

CircleAction CircleAction::standard(const CircleSpec& spec) {
  CircleAction a;
  a.spec_ = spec;
  return a;
}

CircleAction CircleAction::conjugated(const FourierHomeo& phi) const {
  if (conj_ || !noise_.empty()) throw InvalidInput("conjugation applies to a standard action");
  phi.validate();
  CircleAction a = *this;
  a.conj_ = phi;
  return a;
}

CircleAction CircleAction::with_noise(double eps, std::uint64_t seed) const {
  if (!spec_.model.is_free()) throw InvalidInput("per-generator noise needs a free group spec");
  if (conj_ || !noise_.empty()) throw InvalidInput("noise applies to a standard action");
  if (!(eps >= 0)) throw InvalidInput("noise amplitude must be non-negative");
  CircleAction a = *this;
  if (eps == 0) return a;
  std::mt19937_64 rng(seed);
  for (int i = 0; i < spec_.model.num_generators(); ++i) {
    try {
      a.noise_.push_back(FourierHomeo::random(eps, rng()));
    } catch (const InvalidInput& e) {
      throw HypothesisError("noise", e.what());
    }
  }
  if (!spec_.pads.empty() && !a.ping_pong()) {
    throw HypothesisError("ping-pong", "noise of size " + std::to_string(eps) + " breaks the pad containment");
  }
  return a;
}

double CircleAction::enter(double x) const { return conj_ ? conj_->inverse(x) : x; }
double CircleAction::leave(double u) const { return conj_ ? (*conj_)(u) : u; }

double CircleAction::apply(Letter x, double p) const {
  const auto m = spec_.matrix(x);
  if (!noise_.empty()) {
    const auto& psi = noise_[static_cast<std::size_t>(std::abs(x)) - 1];
    return x > 0 ? psi(m.apply(p)) : m.apply(psi.inverse(p));
  }
  return leave(m.apply(enter(p)));
}

MobiusGenerator CircleAction::word_matrix(const Word& w) const {
  MobiusGenerator p;
  for (Letter x : w) p = p * spec_.matrix(x);
  return p;
}

double CircleAction::apply_word(const Word& w, double p) const {
  if (noise_.empty()) return leave(word_matrix(w).apply(enter(p)));
  for (std::size_t i = w.size(); i-- > 0;) p = apply(w[i], p);
  return p;
}

Arc CircleAction::image(Letter x, const Arc& arc) const {
  const double start = apply(x, arc.lo);
  const double end = apply(x, arc.lo + arc.length);
  return {start, wrap_unit(end - start)};
}

bool CircleAction::ping_pong() const {
  if (spec_.pads.empty()) return false;
  for (int r = 0; r < spec_.model.degree(); ++r) {
    const Letter x = letter_from_rank(r);
    const Arc& back = spec_.pads[static_cast<std::size_t>(letter_rank(inverse(x)))];
    const Arc complement{back.hi(), 1 - back.length};
    if (!spec_.pads[static_cast<std::size_t>(r)].strictly_contains(image(x, complement))) return false;
  }
  return true;
}

double CircleAction::generator_distance(const CircleAction& other, std::size_t grid) const {
  double out = 0;
  for (int r = 0; r < spec_.model.degree(); ++r) {
    const Letter x = letter_from_rank(r);
    for (std::size_t i = 0; i < grid; ++i) {
      const double p = static_cast<double>(i) / static_cast<double>(grid);
      out = std::max(out, circle_distance(apply(x, p), other.apply(x, p)));
    }
  }
  return out;
}

std::vector<CircleHomeo> sample_generators(const CircleAction& action, std::size_t resolution) {
  std::vector<CircleHomeo> out;
  for (int r = 0; r < action.spec().model.degree(); ++r) {
    const Letter x = letter_from_rank(r);
    out.push_back(CircleHomeo::sample([&](double p) { return action.apply(x, p); }, resolution));
  }
  return out;
}

// ---------------------------------------------------------------------------

FixedPoint attracting_fixed_point(const std::function<double(double)>& f, double radius) {
  if (!(radius > 0 && radius < 0.25)) throw InvalidInput("fixed point radius must lie in (0, 1/4)");
  auto disp = [&](double t) { return signed_gap(t, f(t)); };
  std::optional<FixedPoint> best;
  std::vector<double> tried;
  for (int i = 0; i < 16; ++i) {
    double x = i / 16.0;
    bool converged = false;
    for (int it = 0; it < 4000; ++it) {
      const double next = f(x);
      const double step = circle_distance(x, next);
      x = next;
      if (step < 1e-14) {
        converged = true;
        break;
      }
    }
    if (!converged) continue;
    if (std::any_of(tried.begin(), tried.end(), [&](double t) { return circle_distance(t, x) < radius; })) continue;
    tried.push_back(x);
    double lo = x - radius, hi = x + radius;
    if (!(disp(lo) > 0 && disp(hi) < 0)) continue;
    for (int it = 0; it < 60; ++it) {
      const double mid = 0.5 * (lo + hi);
      (disp(mid) > 0 ? lo : hi) = mid;
    }
    const double p = 0.5 * (lo + hi);
    const double fp = f(p);
    FixedPoint fx{wrap_unit(p), signed_gap(f(p - radius), fp) / radius, signed_gap(fp, f(p + radius)) / radius};
    if (!(fx.slope_left < 1 && fx.slope_right < 1)) continue;
    if (!best || std::max(fx.slope_left, fx.slope_right) < std::max(best->slope_left, best->slope_right)) best = fx;
  }
  if (!best) throw DomainError("map has no attracting fixed point");
  return *best;
}

FixedPoint attracting_fixed_point(const CircleHomeo& h) {
  return attracting_fixed_point([&](double x) { return h(x); }, 1.0 / static_cast<double>(h.resolution()));
}

std::vector<Word> reduced_words(int num_generators, int max_length, bool cyclic) {
  if (num_generators < 1 || max_length < 0) throw InvalidInput("reduced_words needs k >= 1 and length >= 0");
  const int degree = 2 * num_generators;
  std::vector<Word> out, layer{Word{}};
  for (int len = 1; len <= max_length; ++len) {
    std::vector<Word> next;
    for (const Word& w : layer) {
      for (int r = 0; r < degree; ++r) {
        const Letter x = letter_from_rank(r);
        if (!w.empty() && w.back() == inverse(x)) continue;
        Word v = w;
        v.push_back(x);
        next.push_back(std::move(v));
      }
    }
    for (const Word& w : next)
      if (!cyclic || w.size() == 1 || w[0] != inverse(w.back())) out.push_back(w);
    layer = std::move(next);
  }
  return out;
}

// ---------------------------------------------------------------------------

namespace {
constexpr std::size_t kBuckets = 1u << 16;
constexpr int kPad = 2;
}  // namespace

SemiConjugacy::SemiConjugacy(std::vector<double> xs, std::vector<double> ys) : xs_(std::move(xs)), ys_(std::move(ys)) {
  const std::size_t n = xs_.size();
  if (n < 2 || ys_.size() != n) throw InvalidInput("semi-conjugacy needs at least two matched pairs");
  for (std::size_t i = 0; i < n; ++i) {
    if (!(xs_[i] >= 0 && xs_[i] < 1) || (i > 0 && !(xs_[i] > xs_[i - 1]))) {
      throw InvalidInput("semi-conjugacy sources must be increasing in [0,1)");
    }
  }
  if (!monotone() || !degree_one()) throw InvalidInput("semi-conjugacy images are not monotone of degree one");

  // Periodic extension with kPad wrapped nodes on each side.
  for (int k = -kPad; k < static_cast<int>(n) + kPad; ++k) {
    const int q = k < 0 ? -1 : (k >= static_cast<int>(n) ? 1 : 0);
    const auto i = static_cast<std::size_t>(k - q * static_cast<int>(n));
    x_.push_back(xs_[i] + q);
    y_.push_back(ys_[i] + q);
  }
  const std::size_t m = x_.size();
  std::vector<double> h(m - 1), del(m - 1);
  for (std::size_t i = 0; i + 1 < m; ++i) {
    h[i] = x_[i + 1] - x_[i];
    del[i] = (y_[i + 1] - y_[i]) / h[i];
  }
  m_.assign(m, 0.0);
  m_[0] = del[0];
  m_[m - 1] = del[m - 2];
  for (std::size_t k = 1; k + 1 < m; ++k) {
    if (del[k - 1] <= 0 || del[k] <= 0) continue;
    const double w1 = 2 * h[k] + h[k - 1], w2 = h[k] + 2 * h[k - 1];
    m_[k] = (w1 + w2) / (w1 / del[k - 1] + w2 / del[k]);
  }
  bucket_.resize(kBuckets);
  std::size_t k = 0;
  for (std::size_t b = 0; b < kBuckets; ++b) {
    const double t = static_cast<double>(b) / kBuckets;
    while (k + 1 < m && x_[k + 1] <= t) ++k;
    bucket_[b] = static_cast<std::uint32_t>(k);
  }
}

std::size_t SemiConjugacy::locate(double x) const {
  auto b = static_cast<std::size_t>(x * kBuckets);
  if (b >= kBuckets) b = kBuckets - 1;
  std::size_t k = bucket_[b];
  while (k + 2 < x_.size() && x_[k + 1] <= x) ++k;
  return k;
}

double SemiConjugacy::operator()(double x) const {
  if (x_.empty()) return wrap_unit(x);
  x = wrap_unit(x);
  const std::size_t k = locate(x);
  const double h = x_[k + 1] - x_[k];
  const double t = (x - x_[k]) / h;
  const double h00 = (1 + 2 * t) * (1 - t) * (1 - t), h10 = t * (1 - t) * (1 - t);
  const double h01 = t * t * (3 - 2 * t), h11 = t * t * (t - 1);
  return wrap_unit(h00 * y_[k] + h10 * h * m_[k] + h01 * y_[k + 1] + h11 * h * m_[k + 1]);
}

bool SemiConjugacy::monotone() const {
  for (std::size_t i = 1; i < ys_.size(); ++i)
    if (ys_[i] < ys_[i - 1]) return false;
  return std::all_of(m_.begin(), m_.end(), [](double s) { return s >= 0; });
}

bool SemiConjugacy::degree_one() const {
  return !ys_.empty() && ys_.back() <= ys_.front() + 1 && ys_.back() >= ys_.front();
}

namespace {

struct MatchedPair {
  double x, y;
};

// Attracting fixed point of rho(w) with a contraction certificate, if any.
std::optional<double> certified_fixed_point(const CircleAction& action, const Word& w, double contraction) {
  if (!action.letterwise()) {
    const auto m = action.word_matrix(w);
    if (!m.hyperbolic()) return std::nullopt;
    const double tr = std::abs(m.trace());
    const double l = tr / 2 + std::sqrt(tr * tr / 4 - 1);
    if (!(1 / (l * l) < contraction)) return std::nullopt;
    return wrap_unit(action.leave(m.attracting_fixed_point()));
  }
  try {
    const auto fx = attracting_fixed_point([&](double p) { return action.apply_word(w, p); });
    if (std::max(fx.slope_left, fx.slope_right) < contraction) return fx.x;
  } catch (const DomainError&) {
  }
  return std::nullopt;
}

// Longest cyclically consistent subset: pairs sorted by x, lifted y taken
// relative to an anchor must be nondecreasing.
std::vector<std::size_t> cyclic_consistent(const std::vector<MatchedPair>& pairs, std::size_t& best_anchor) {
  const std::size_t n = pairs.size();
  std::vector<std::size_t> best;
  for (int a = 0; a < 8; ++a) {
    const std::size_t anchor = n * static_cast<std::size_t>(a) / 8;
    std::vector<double> tails;
    std::vector<std::size_t> tail_idx, prev(n, n), seq;
    for (std::size_t j = 0; j < n; ++j) {
      const std::size_t i = (anchor + j) % n;
      const double v = wrap_unit(pairs[i].y - pairs[anchor].y);
      const auto pos = static_cast<std::size_t>(std::upper_bound(tails.begin(), tails.end(), v) - tails.begin());
      if (pos == tails.size()) {
        tails.push_back(v);
        tail_idx.push_back(i);
      } else {
        tails[pos] = v;
        tail_idx[pos] = i;
      }
      prev[i] = pos > 0 ? tail_idx[pos - 1] : n;
    }
    if (tails.size() <= best.size()) continue;
    for (std::size_t i = tail_idx.back(); i != n; i = prev[i]) seq.push_back(i);
    std::sort(seq.begin(), seq.end());
    best = std::move(seq);
    best_anchor = anchor;
  }
  return best;
}

}  // namespace

SemiConjugacy build_semiconjugacy(const CircleAction& rho0, const CircleAction& rho,
                                  const SemiConjugacyOptions& options) {
  if (rho0.spec().model.num_generators() != rho.spec().model.num_generators() ||
      rho0.spec().model.is_free() != rho.spec().model.is_free()) {
    throw InvalidInput("actions do not share a group");
  }
  if (options.word_length_cap < 1 || options.word_length_cap > 10) throw InvalidInput("word length cap must be in 1..10");

  std::vector<MatchedPair> pairs;
  std::size_t words = 0;
  for (const Word& w : reduced_words(rho.spec().model.num_generators(), options.word_length_cap, true)) {
    const auto x = certified_fixed_point(rho, w, options.contraction);
    if (!x) continue;
    const auto y = certified_fixed_point(rho0, w, options.contraction);
    if (!y) continue;
    ++words;
    pairs.push_back({*x, *y});
  }
  std::sort(pairs.begin(), pairs.end(), [](const MatchedPair& a, const MatchedPair& b) { return a.x < b.x; });
  std::vector<MatchedPair> unique;
  for (const auto& p : pairs)
    if (unique.empty() || p.x - unique.back().x > 1e-12) unique.push_back(p);
  if (unique.size() < options.min_pairs) {
    throw HypothesisError("insufficient-data", std::to_string(unique.size()) + " matched pairs");
  }

  std::size_t anchor = 0;
  const auto keep = cyclic_consistent(unique, anchor);
  if (keep.size() < options.min_pairs) {
    throw HypothesisError("insufficient-data", std::to_string(keep.size()) + " consistent pairs");
  }
  std::vector<double> xs, ys;
  const double base = unique[anchor].y;
  for (std::size_t i : keep) {
    const double lifted = base + wrap_unit(unique[i].y - base);
    xs.push_back(unique[i].x);
    ys.push_back(i < anchor ? lifted - 1 : lifted);
  }
  const double shift = std::floor(ys.front());
  for (double& y : ys) y -= shift;

  SemiConjugacy h(std::move(xs), std::move(ys));
  h.matched = keep.size();
  h.discarded = unique.size() - keep.size();
  h.words = words;
  return h;
}

SemiConjugacyReport verify_semiconjugacy(const SemiConjugacy& h, const CircleAction& rho0, const CircleAction& rho,
                                         const std::vector<Word>& words, const std::vector<double>& points) {
  SemiConjugacyReport rep;
  rep.monotone = h.monotone();
  rep.degree_one = h.degree_one();
  rep.words = words.size();
  rep.points = points.size();
  std::vector<double> hx(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) {
    hx[i] = h(points[i]);
    rep.distance_to_identity = std::max(rep.distance_to_identity, circle_distance(hx[i], points[i]));
  }
  if (!rho.letterwise() && !rho0.letterwise()) {
    // Precompute entry angles so each word costs two Mobius evaluations per point.
    std::vector<double> c(points.size()), s(points.size()), c0(points.size()), s0(points.size());
    for (std::size_t i = 0; i < points.size(); ++i) {
      const double u = rho.enter(points[i]), u0 = rho0.enter(hx[i]);
      c[i] = std::cos(std::numbers::pi * u);
      s[i] = std::sin(std::numbers::pi * u);
      c0[i] = std::cos(std::numbers::pi * u0);
      s0[i] = std::sin(std::numbers::pi * u0);
    }
    for (const Word& w : words) {
      const auto m = rho.word_matrix(w), m0 = rho0.word_matrix(w);
      for (std::size_t i = 0; i < points.size(); ++i) {
        const double lhs = h(rho.leave(m.apply_unit(c[i], s[i])));
        const double rhs = rho0.leave(m0.apply_unit(c0[i], s0[i]));
        rep.defect = std::max(rep.defect, circle_distance(lhs, rhs));
      }
    }
    return rep;
  }
  for (const Word& w : words) {
    for (std::size_t i = 0; i < points.size(); ++i) {
      const double lhs = h(rho.apply_word(w, points[i]));
      const double rhs = rho0.apply_word(w, hx[i]);
      rep.defect = std::max(rep.defect, circle_distance(lhs, rhs));
    }
  }
  return rep;
}

SemiConjugacyReport verify_semiconjugacy(const SemiConjugacy& h, const CircleAction& rho0, const CircleAction& rho,
                                         const std::vector<Word>& words, std::size_t grid) {
  if (grid == 0) throw InvalidInput("grid must be positive");
  std::vector<double> points(grid);
  for (std::size_t i = 0; i < grid; ++i) points[i] = static_cast<double>(i) / static_cast<double>(grid);
  return verify_semiconjugacy(h, rho0, rho, words, points);
}

// ---------------------------------------------------------------------------

MinimalSetCover minimal_set(const CircleAction& action, int depth) {
  const auto& spec = action.spec();
  if (spec.kind != CircleSpecKind::Schottky || spec.pads.empty()) throw InvalidInput("minimal set needs a Schottky spec");
  if (depth < 1 || depth > 12) throw InvalidInput("minimal set depth must be in 1..12");
  const int degree = spec.model.degree();
  MinimalSetCover cover;
  std::vector<Word> words;
  for (int r = 0; r < degree; ++r) words.push_back(Word{letter_from_rank(r)});
  cover.depth.push_back(spec.pads);
  for (int n = 2; n <= depth; ++n) {
    std::vector<Word> next_words;
    std::vector<Arc> next;
    const auto& parents = cover.depth.back();
    for (std::size_t p = 0; p < words.size(); ++p) {
      for (int r = 0; r < degree; ++r) {
        const Letter y = letter_from_rank(r);
        if (y == inverse(words[p].back())) continue;
        const Arc& pad = spec.pads[static_cast<std::size_t>(r)];
        const double lo = action.apply_word(words[p], pad.lo);
        const double hi = action.apply_word(words[p], pad.lo + pad.length);
        const Arc child{lo, wrap_unit(hi - lo)};
        if (!parents[p].strictly_contains(child)) {
          throw HypothesisError("ping-pong", "depth " + std::to_string(n) + " arc leaves its parent");
        }
        Word w = words[p];
        w.push_back(y);
        next_words.push_back(std::move(w));
        next.push_back(child);
      }
    }
    words = std::move(next_words);
    cover.depth.push_back(std::move(next));
  }
  for (const auto& level : cover.depth) {
    double total = 0;
    for (const Arc& a : level) total += a.length;
    cover.total_length.push_back(total);
  }
  return cover;
}

std::vector<double> minimal_set_sample(const CircleAction& action, int n) {
  if (n < 1 || n > 12) throw InvalidInput("minimal set sample length must be in 1..12");
  const auto& model = action.spec().model;
  std::vector<double> fix;
  for (int r = 0; r < model.degree(); ++r) {
    const Letter x = letter_from_rank(r);
    fix.push_back(attracting_fixed_point([&](double p) { return action.apply(x, p); }).x);
  }
  std::vector<double> out;
  for (const Word& w : reduced_words(model.num_generators(), n)) {
    if (static_cast<int>(w.size()) != n) continue;
    out.push_back(action.apply_word(w, fix[static_cast<std::size_t>(letter_rank(w.back()))]));
  }
  return out;
}

}  // namespace hypstab
