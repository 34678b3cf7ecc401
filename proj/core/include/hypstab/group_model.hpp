#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "hypstab/word.hpp"

namespace hypstab {

enum class ModelKind { Free, Surface };

/// A finitely presented hyperbolic group with a decidable word problem:
/// a free group of rank k, or the closed orientable surface group of genus g
/// with the single relator [a1,b1]...[ag,bg].
///
/// Generator numbering: free group generators are 1..k and print as
/// a, b, c, ...; surface generators a_j, b_j are numbered 2j-1, 2j and print
/// as a1 b1 a2 b2 ...  Inverses print in upper case.
class GroupModel {
 public:
  static constexpr int kMaxFreeRank = 26;
  static constexpr int kMaxGenus = 8;

  static GroupModel free_group(int rank);
  static GroupModel surface_group(int genus);
  /// Parses "free:2" or "surface:2".
  static GroupModel parse(std::string_view spec);

  ModelKind kind() const { return kind_; }
  bool is_free() const { return kind_ == ModelKind::Free; }
  /// Rank for free groups, genus for surface groups.
  int parameter() const { return parameter_; }
  /// Number of generators k; the symmetric generating set has 2k letters.
  int num_generators() const { return num_generators_; }
  int degree() const { return 2 * num_generators_; }
  const std::vector<Word>& relators() const { return relators_; }
  std::string spec() const;

  std::string letter_name(Letter x) const;
  /// Tokens separated by spaces, e.g. "a1 b1 A1".  Empty word prints as "".
  std::string format(const Word& w) const;
  /// Accepts whitespace-separated tokens or a compact run such as "a1b1A1"
  /// or "abAB".  A missing index defaults to 1.
  Word parse_word(std::string_view text) const;

  /// Free reduction followed by Dehn's algorithm.  The result represents the
  /// same element, and is empty iff the element is trivial.
  Word dehn_reduce(const Word& w) const;
  bool is_trivial(const Word& w) const;
  bool equal(const Word& u, const Word& v) const;
  /// Reduced representative of uv (free reduction + Dehn shortening).
  Word multiply(const Word& u, const Word& v) const;

  friend bool operator==(const GroupModel& a, const GroupModel& b) {
    return a.kind_ == b.kind_ && a.parameter_ == b.parameter_;
  }

 private:
  GroupModel(ModelKind kind, int parameter);

  ModelKind kind_;
  int parameter_;
  int num_generators_;
  std::vector<Word> relators_;
  // For the one-relator case each letter occurs exactly once in the relator;
  // position_[letter_rank(x)] is that occurrence.
  std::vector<int> position_;
};

}  // namespace hypstab
