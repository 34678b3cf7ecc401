#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <vector>

#include "hypstab/group_model.hpp"

namespace hypstab {

/// Orientation-preserving isometry of the Poincare disc,
/// z -> (alpha z + beta) / (conj(beta) z + conj(alpha)), |alpha|^2 - |beta|^2 = 1.
struct Su11 {
  std::complex<double> alpha{1.0, 0.0};
  std::complex<double> beta{0.0, 0.0};

  static Su11 identity() { return {}; }
  static Su11 rotation(double angle);
  /// Hyperbolic translation by `distance` along the real diameter.
  static Su11 translation(double distance);

  Su11 operator*(const Su11& o) const {
    return {alpha * o.alpha + beta * std::conj(o.beta), alpha * o.beta + beta * std::conj(o.alpha)};
  }
  Su11 inverse() const { return {std::conj(alpha), -beta}; }
  std::complex<double> apply(std::complex<double> z) const {
    return (alpha * z + beta) / (std::conj(beta) * z + std::conj(alpha));
  }
  double trace() const { return 2.0 * alpha.real(); }
  /// Projective normal form: the overall sign is fixed so that the dominant
  /// component of alpha is positive (|alpha| >= 1, so this is stable).
  Su11 normalized() const;
  double distance_to(const Su11& o) const;
};

/// Discrete faithful representation of the genus-g surface group obtained
/// from the side pairings of the regular hyperbolic 4g-gon with all angles
/// 2*pi/(4g).  Side k (counter-clockwise from angle 0) carries the k-th
/// letter of the relator a1 b1 A1 B1 a2 ...; generator a_j maps side A_j to
/// side a_j and b_j maps side b_j to side B_j.
std::vector<Su11> surface_generators(int genus);

/// Image of a letter under a generator table indexed by generator number-1.
inline Su11 letter_matrix(const std::vector<Su11>& gens, Letter x) {
  const auto& g = gens[static_cast<std::size_t>((x > 0 ? x : -x) - 1)];
  return x > 0 ? g : g.inverse();
}

Su11 word_matrix(const std::vector<Su11>& gens, const Word& w);

/// 64-bit fingerprint of the projective class, quantized at 2^-16.  Equal
/// group elements computed along different words hash equal unless rounding
/// straddles a cell boundary; callers confirm candidate matches exactly.
std::uint64_t fingerprint(const Su11& m);
/// The primary fingerprint followed by every alternative a tiny perturbation
/// of m could produce (rounding near a cell edge, or an ambiguous sign
/// normalization).  Lookups probe all of them.
struct FingerprintSet {
  std::uint64_t keys[32];
  int count = 0;
  const std::uint64_t* begin() const { return keys; }
  const std::uint64_t* end() const { return keys + count; }
};
FingerprintSet fingerprint_candidates(const Su11& m);

}  // namespace hypstab
