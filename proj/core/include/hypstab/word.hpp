#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

namespace hypstab {

/// A generator or its inverse: +i is generator i (1-based), -i its inverse.
using Letter = std::int8_t;

constexpr Letter inverse(Letter x) { return static_cast<Letter>(-x); }

/// Position of a letter in the generator order used for shortlex comparison:
/// generator index first, then the inverse flag (a1 < A1 < b1 < B1 < ...).
constexpr int letter_rank(Letter x) { return x > 0 ? 2 * (x - 1) : 2 * (-x - 1) + 1; }
constexpr Letter letter_from_rank(int rank) {
  return static_cast<Letter>(rank % 2 == 0 ? rank / 2 + 1 : -(rank / 2 + 1));
}

/// A word in the symmetric generating set.  Words produced by the library
/// are freely reduced; `Word` itself does not enforce it so that parsers and
/// tests can build unreduced input.
class Word {
 public:
  Word() = default;
  Word(std::initializer_list<Letter> letters) : letters_(letters) {}
  explicit Word(std::vector<Letter> letters) : letters_(std::move(letters)) {}

  std::size_t size() const { return letters_.size(); }
  bool empty() const { return letters_.empty(); }
  Letter operator[](std::size_t i) const { return letters_[i]; }
  Letter back() const { return letters_.back(); }
  auto begin() const { return letters_.begin(); }
  auto end() const { return letters_.end(); }
  auto rbegin() const { return letters_.rbegin(); }
  auto rend() const { return letters_.rend(); }
  std::span<const Letter> letters() const { return letters_; }

  void push_back(Letter x) { letters_.push_back(x); }
  void pop_back() { letters_.pop_back(); }
  void reserve(std::size_t n) { letters_.reserve(n); }

  Word inverse() const;
  Word prefix(std::size_t n) const;
  Word subword(std::size_t start, std::size_t len) const;
  Word operator*(const Word& other) const;  // concatenation, no reduction
  Word power(std::size_t n) const;

  friend bool operator==(const Word&, const Word&) = default;
  /// Shortlex order with the letter order of `letter_rank`.
  friend bool shortlex_less(const Word& a, const Word& b);

  std::size_t hash() const;

 private:
  std::vector<Letter> letters_;
};

bool shortlex_less(const Word& a, const Word& b);

/// Freely reduced form.  Idempotent and length non-increasing.
Word free_reduce(const Word& w);
bool is_freely_reduced(const Word& w);
/// Cyclically reduced core (free reduction, then cancel first/last pairs).
Word cyclic_reduce(const Word& w);

}  // namespace hypstab

template <>
struct std::hash<hypstab::Word> {
  std::size_t operator()(const hypstab::Word& w) const { return w.hash(); }
};
