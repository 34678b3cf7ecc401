#include "hypstab/word.hpp"

#include <algorithm>

namespace hypstab {

Word Word::inverse() const {
  std::vector<Letter> out(letters_.rbegin(), letters_.rend());
  for (auto& x : out) x = hypstab::inverse(x);
  return Word(std::move(out));
}

Word Word::prefix(std::size_t n) const {
  n = std::min(n, letters_.size());
  return Word(std::vector<Letter>(letters_.begin(), letters_.begin() + static_cast<std::ptrdiff_t>(n)));
}

Word Word::subword(std::size_t start, std::size_t len) const {
  start = std::min(start, letters_.size());
  len = std::min(len, letters_.size() - start);
  auto first = letters_.begin() + static_cast<std::ptrdiff_t>(start);
  return Word(std::vector<Letter>(first, first + static_cast<std::ptrdiff_t>(len)));
}

Word Word::operator*(const Word& other) const {
  std::vector<Letter> out;
  out.reserve(letters_.size() + other.letters_.size());
  out.insert(out.end(), letters_.begin(), letters_.end());
  out.insert(out.end(), other.letters_.begin(), other.letters_.end());
  return Word(std::move(out));
}

Word Word::power(std::size_t n) const {
  std::vector<Letter> out;
  out.reserve(letters_.size() * n);
  for (std::size_t i = 0; i < n; ++i) out.insert(out.end(), letters_.begin(), letters_.end());
  return Word(std::move(out));
}

bool shortlex_less(const Word& a, const Word& b) {
  if (a.size() != b.size()) return a.size() < b.size();
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] != b[i]) return letter_rank(a[i]) < letter_rank(b[i]);
  }
  return false;
}

std::size_t Word::hash() const {
  // FNV-1a over the letters.
  std::uint64_t h = 1469598103934665603ULL;
  for (Letter x : letters_) {
    h ^= static_cast<std::uint8_t>(x);
    h *= 1099511628211ULL;
  }
  return static_cast<std::size_t>(h);
}

Word free_reduce(const Word& w) {
  std::vector<Letter> out;
  out.reserve(w.size());
  for (Letter x : w) {
    if (!out.empty() && out.back() == inverse(x)) {
      out.pop_back();
    } else {
      out.push_back(x);
    }
  }
  return Word(std::move(out));
}

bool is_freely_reduced(const Word& w) {
  for (std::size_t i = 1; i < w.size(); ++i) {
    if (w[i] == inverse(w[i - 1])) return false;
  }
  return true;
}

Word cyclic_reduce(const Word& w) {
  Word r = free_reduce(w);
  std::size_t lo = 0;
  std::size_t hi = r.size();
  while (hi - lo >= 2 && r[lo] == inverse(r[hi - 1])) {
    ++lo;
    --hi;
  }
  return r.subword(lo, hi - lo);
}

}  // namespace hypstab
