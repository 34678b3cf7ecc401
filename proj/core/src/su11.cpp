#include "hypstab/su11.hpp"

#include <cmath>
#include <numbers>

#include "hypstab/errors.hpp"

namespace hypstab {

Su11 Su11::rotation(double angle) {
  return {std::polar(1.0, angle / 2.0), {0.0, 0.0}};
}

Su11 Su11::translation(double distance) {
  return {{std::cosh(distance / 2.0), 0.0}, {std::sinh(distance / 2.0), 0.0}};
}

Su11 Su11::normalized() const {
  const double key = std::abs(alpha.real()) >= std::abs(alpha.imag()) ? alpha.real() : alpha.imag();
  return key < 0 ? Su11{-alpha, -beta} : *this;
}

double Su11::distance_to(const Su11& o) const {
  const Su11 a = normalized();
  const Su11 b = o.normalized();
  return std::max(std::abs(a.alpha - b.alpha), std::abs(a.beta - b.beta));
}

std::vector<Su11> surface_generators(int genus) {
  if (genus < 2) throw InvalidInput("surface generators need genus >= 2");
  const int sides = 4 * genus;
  const double pi = std::numbers::pi;
  // Inradius of the regular 4g-gon with interior angles 2*pi/(4g).
  const double inradius = std::acosh(1.0 / std::tan(pi / sides));
  const Su11 across = Su11::translation(2.0 * inradius);
  auto side_angle = [&](int k) { return 2.0 * pi * k / sides; };
  // Maps side `from` onto side `to`, carrying the polygon across side `to`.
  auto pairing = [&](int to, int from) {
    return Su11::rotation(side_angle(to)) * across * Su11::rotation(pi - side_angle(from));
  };
  std::vector<Su11> gens;
  for (int j = 0; j < genus; ++j) {
    const int a = 4 * j;
    const int b = 4 * j + 1;
    const int a_inv = 4 * j + 2;
    const int b_inv = 4 * j + 3;
    gens.push_back(pairing(a, a_inv));
    gens.push_back(pairing(b_inv, b));
  }
  return gens;
}

Su11 word_matrix(const std::vector<Su11>& gens, const Word& w) {
  Su11 m = Su11::identity();
  for (Letter x : w) m = m * letter_matrix(gens, x);
  return m;
}

namespace {

constexpr double kCellScale = 65536.0;
// Fraction of a cell within which rounding is treated as ambiguous.
constexpr double kEdgeSlack = 1e-3;

std::uint64_t hash_cells(const std::int64_t (&cells)[4]) {
  std::uint64_t h = 1469598103934665603ULL;
  for (std::int64_t c : cells) {
    h ^= static_cast<std::uint64_t>(c) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    h *= 1099511628211ULL;
  }
  return h;
}

void parts_of(const Su11& n, double (&parts)[4]) {
  parts[0] = n.alpha.real();
  parts[1] = n.alpha.imag();
  parts[2] = n.beta.real();
  parts[3] = n.beta.imag();
}

}  // namespace

std::uint64_t fingerprint(const Su11& m) {
  double parts[4];
  parts_of(m.normalized(), parts);
  std::int64_t cells[4];
  for (int i = 0; i < 4; ++i) cells[i] = std::llround(parts[i] * kCellScale);
  return hash_cells(cells);
}

FingerprintSet fingerprint_candidates(const Su11& m) {
  FingerprintSet out;
  Su11 signs[2] = {m.normalized(), {}};
  int num_signs = 1;
  const double re = std::abs(m.alpha.real());
  const double im = std::abs(m.alpha.imag());
  if (std::abs(re - im) < 1e-6 * std::max(1.0, re + im)) {
    signs[1] = Su11{-signs[0].alpha, -signs[0].beta};
    num_signs = 2;
  }
  for (int s = 0; s < num_signs; ++s) {
    const Su11& n = signs[s];
    double parts[4];
    parts_of(n, parts);
    std::int64_t lo[4];
    std::int64_t alt[4];
    int ambiguous = 0;
    for (int i = 0; i < 4; ++i) {
      const double scaled = parts[i] * kCellScale;
      lo[i] = std::llround(scaled);
      const double frac = scaled - std::floor(scaled);
      alt[i] = lo[i];
      if (std::abs(frac - 0.5) < kEdgeSlack) {
        alt[i] = lo[i] == static_cast<std::int64_t>(std::floor(scaled)) ? lo[i] + 1 : lo[i] - 1;
        ambiguous |= 1 << i;
      }
    }
    for (int mask = 0; mask < 16; ++mask) {
      if ((mask & ~ambiguous) != 0) continue;
      std::int64_t cells[4];
      for (int i = 0; i < 4; ++i) cells[i] = (mask >> i & 1) ? alt[i] : lo[i];
      out.keys[out.count++] = hash_cells(cells);
    }
  }
  return out;
}

}  // namespace hypstab
