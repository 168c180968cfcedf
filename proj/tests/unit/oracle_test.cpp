// Sanity checks on the oracles themselves, against hand-counted values.
#include <gtest/gtest.h>

#include "helpers.hpp"
#include "oracles.hpp"

using namespace polex;
using testing_support::sc;
using testing_support::universe;

TEST(Oracle, HandCountedXor) {
  const auto u = universe({"Home", "Work", "Photo", "Document"});
  // Over (Home, Document) only Home=0, Document=1 separates the two.
  EXPECT_EQ(oracle::xor_count(sc(u, {"Home", "Document"}), sc(u, {"Document"})), 1u);
  // Over (Home, Photo, Document): 1,0,1 and 1,1,0.
  EXPECT_EQ(oracle::xor_count(sc(u, {"Home", "Document"}), sc(u, {"Home", "Photo"})), 2u);
  EXPECT_EQ(oracle::xor_count(sc(u, {"Work"}), sc(u, {"Work"})), 0u);
  EXPECT_EQ(oracle::xor_count(sc(u, {"Work"}), sc(u, {"Photo"})), 2u);
}

TEST(Oracle, WeightedHandValue) {
  const auto u = universe({"Home", "Photo", "Document"});
  WeightTable w(3);
  w.set(0, {1, 2});
  // Union {Home,Photo,Document}: total mass 3*2*2 = 12; private vars Photo and
  // Document each contribute w1 = 1, so 1 - 2/12.
  EXPECT_EQ(oracle::mu_weighted(sc(u, {"Home", "Document"}), sc(u, {"Home", "Photo"}), w),
            Rational(5) / Rational(6));
}

TEST(Oracle, GuardsLargeUnions) {
  const auto u = testing_support::numbered_universe(30);
  std::vector<TagId> all;
  for (TagId i = 0; i < 30; ++i) all.push_back(i);
  const auto big = Scenario::from_ids(u, all);
  EXPECT_THROW(oracle::xor_count(big, Scenario::from_ids(u, {0})), oracle::TooLargeForOracle);
}
