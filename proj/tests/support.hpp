#pragma once

#include <random>

#include "hypstab/group_model.hpp"
#include "hypstab/word.hpp"

namespace hypstab::fixtures {

// Uniform random word over the symmetric generators (not reduced).
inline Word random_word(std::mt19937_64& rng, int num_generators, int length) {
  std::uniform_int_distribution<int> pick(0, 2 * num_generators - 1);
  Word w;
  for (int i = 0; i < length; ++i) w.push_back(letter_from_rank(pick(rng)));
  return w;
}

// Random freely reduced word of exactly the given length.
inline Word random_reduced_word(std::mt19937_64& rng, int num_generators, int length) {
  std::uniform_int_distribution<int> pick(0, 2 * num_generators - 1);
  Word w;
  while (static_cast<int>(w.size()) < length) {
    const Letter x = letter_from_rank(pick(rng));
    if (!w.empty() && w.back() == inverse(x)) continue;
    w.push_back(x);
  }
  return w;
}

}  // namespace hypstab::fixtures
