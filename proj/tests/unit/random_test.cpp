#include <gtest/gtest.h>

#include <array>

#include "polex/random.hpp"

using polex::Rng;

TEST(Rng, StreamIsTheStandardEngine) {
  // The 10000th output of a default-seeded mt19937_64 is fixed by the standard.
  Rng rng(5489u);
  std::uint64_t x = 0;
  for (int i = 0; i < 10000; ++i) x = rng.next();
  EXPECT_EQ(x, 9981545732273789042ull);
}

TEST(Rng, FrozenDraws) {
  Rng a(1);
  Rng b(1);
  for (int i = 0; i < 100; ++i) EXPECT_EQ(a.below(7), b.below(7));
  EXPECT_EQ(polex::derive_seed(0, 0), polex::derive_seed(0, 0));
  EXPECT_NE(polex::derive_seed(0, 0), polex::derive_seed(0, 1));
  EXPECT_NE(polex::derive_seed(1, 0), polex::derive_seed(0, 1));
}

TEST(Rng, BelowStaysInRangeAndCoversIt) {
  Rng rng(3);
  std::array<int, 6> hits{};
  for (int i = 0; i < 6000; ++i) {
    const auto v = rng.below(6);
    ASSERT_LT(v, 6u);
    ++hits[v];
  }
  for (int h : hits) EXPECT_GT(h, 850);
  EXPECT_EQ(rng.below(1), 0u);
}

TEST(Rng, CoinIsRoughlyFair) {
  Rng rng(11);
  int heads = 0;
  for (int i = 0; i < 20000; ++i) heads += rng.coin() ? 1 : 0;
  EXPECT_NEAR(heads / 20000.0, 0.5, 0.02);
}
