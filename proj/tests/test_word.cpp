#include <gtest/gtest.h>

#include "hypstab/half_int.hpp"
#include "hypstab/word.hpp"
#include "support.hpp"

using namespace hypstab;

namespace {
constexpr Letter a = 1, A = -1, b = 2, B = -2;
}

TEST(FreeReduce, Examples) {
  EXPECT_EQ(free_reduce(Word{a, A, b}), (Word{b}));
  EXPECT_EQ(free_reduce(Word{}), Word{});
  EXPECT_EQ(free_reduce(Word{a, b, B, a}), (Word{a, a}));
  EXPECT_EQ(free_reduce(Word{a, b, B, A}), Word{});
}

TEST(FreeReduce, IdempotentAndShortening) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 2000; ++trial) {
    const Word w = fixtures::random_word(rng, 3, trial % 25);
    const Word r = free_reduce(w);
    EXPECT_TRUE(is_freely_reduced(r));
    EXPECT_EQ(free_reduce(r), r);
    EXPECT_LE(r.size(), w.size());
  }
}

TEST(Word, InverseAndConcatenation) {
  const Word w{a, b, A};
  EXPECT_EQ(w.inverse(), (Word{a, B, A}));
  EXPECT_TRUE(free_reduce(w * w.inverse()).empty());
  EXPECT_EQ(Word{a}.power(3), (Word{a, a, a}));
  EXPECT_EQ(w.prefix(2), (Word{a, b}));
  EXPECT_EQ(w.subword(1, 2), (Word{b, A}));
}

TEST(Word, ShortlexOrder) {
  EXPECT_TRUE(shortlex_less(Word{a}, Word{A}));
  EXPECT_TRUE(shortlex_less(Word{A}, Word{b}));
  EXPECT_TRUE(shortlex_less(Word{B}, Word{a, a}));
  EXPECT_FALSE(shortlex_less(Word{a, b}, Word{a, b}));
}

TEST(Word, CyclicReduce) {
  EXPECT_EQ(cyclic_reduce(Word{a, b, a, A, A}), (Word{b}));
  EXPECT_EQ(cyclic_reduce(Word{b, a, B}), (Word{a}));
}

TEST(HalfInt, Arithmetic) {
  const HalfInt x = HalfInt::from_twice(7);
  EXPECT_EQ(x.str(), "3.5");
  EXPECT_EQ(x.floor(), 3);
  EXPECT_EQ(x.ceil(), 4);
  EXPECT_EQ((x + x).str(), "7");
  EXPECT_LT(HalfInt(3), x);
}
