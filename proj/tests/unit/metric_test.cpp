#include <gtest/gtest.h>

#include "helpers.hpp"
#include "oracles.hpp"
#include "polex/error.hpp"
#include "polex/metric.hpp"

using namespace polex;
using testing_support::sc;
using testing_support::universe;

namespace {

struct Bob : ::testing::Test {
  Universe u = universe({"Home", "Work", "Photo", "Document", "Receipt"});
  WeightTable home2 = [this] {
    WeightTable w(u.size());
    w.set(u.id_of("Home"), {1, 2});
    return w;
  }();
};

Rational frac(long n, long d) { return Rational(n) / Rational(d); }

}  // namespace

TEST_F(Bob, UnweightedGoldens) {
  EXPECT_EQ(mu(sc(u, {"Home", "Document"}), sc(u, {"Document"})).value(), frac(3, 4));
  EXPECT_EQ(mu(sc(u, {"Home", "Document"}), sc(u, {"Home", "Photo"})).value(), frac(3, 4));
  EXPECT_EQ(mu(sc(u, {"Home"}), sc(u, {"Home"})).value(), frac(1, 1));
}

TEST_F(Bob, WeightedGoldens) {
  EXPECT_EQ(mu_weighted(sc(u, {"Home", "Document"}), sc(u, {"Document"}), home2).value(), frac(2, 3));
  EXPECT_EQ(mu_weighted(sc(u, {"Home", "Document"}), sc(u, {"Home", "Photo"}), home2).value(),
            frac(5, 6));
}

TEST_F(Bob, UniformWeightsMatchUnweighted) {
  const WeightTable unit(u.size());
  const auto a = sc(u, {"Home", "Work", "Receipt"});
  const auto b = sc(u, {"Work", "Photo"});
  EXPECT_EQ(mu_weighted(a, b, unit), mu(a, b));
}

TEST_F(Bob, Symmetric) {
  const auto a = sc(u, {"Home", "Document"});
  const auto b = sc(u, {"Photo"});
  EXPECT_EQ(mu_weighted(a, b, home2), mu_weighted(b, a, home2));
}

TEST_F(Bob, DifferenceProfile) {
  const auto p = difference_profile(sc(u, {"Home", "Document"}), sc(u, {"Home", "Photo", "Work"}));
  EXPECT_EQ(p.k1, 1u);
  EXPECT_EQ(p.k2, 2u);
  EXPECT_EQ(p.k, 4u);
  EXPECT_EQ(p.shared, std::vector<TagId>{0});
}

TEST_F(Bob, RejectsForeignUniverse) {
  const auto other = universe({"Home"});
  try {
    mu(sc(u, {"Home"}), sc(other, {"Home"}));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kUniverseMismatch);
  }
}

TEST(Similarity, FractionStrings) {
  EXPECT_EQ(Similarity(frac(10, 12)).to_string(), "5/6");
  EXPECT_EQ(Similarity(frac(1, 1)).to_string(), "1");
  EXPECT_DOUBLE_EQ(Similarity(frac(3, 4)).to_double(), 0.75);
  EXPECT_LT(Similarity(frac(2, 3)), Similarity(frac(3, 4)));
}

TEST(WeightTable, DefaultsAndValidation) {
  WeightTable w(2);
  EXPECT_TRUE(w.is_uniform());
  EXPECT_EQ(w.at(9), (WeightPair{1, 1}));
  w.set(1, {1, 3});
  EXPECT_FALSE(w.is_uniform());
  EXPECT_THROW(w.set(0, {0, 1}), Error);
}

TEST(Metric, LargeUniverseStaysExact) {
  std::vector<std::string> names;
  for (int i = 0; i < 200; ++i) names.push_back("t" + std::to_string(i));
  const auto u = Universe::build(names);
  std::vector<TagId> left, right;
  for (TagId i = 0; i < 120; ++i) left.push_back(i);
  for (TagId i = 80; i < 200; ++i) right.push_back(i);
  const auto a = Scenario::from_ids(u, left);
  const auto b = Scenario::from_ids(u, right);
  // k1 = k2 = 80, k = 200.
  const Rational expected =
      1 - Rational((BigInt(1) << 80) * 2 - 2) / Rational(BigInt(1) << 200);
  EXPECT_EQ(mu(a, b).value(), expected);
  EXPECT_LT(mu(a, b).value(), Rational(1));
}

TEST(Metric, WeightedAgreesWithEnumerationOnSmallCases) {
  const auto u = testing_support::numbered_universe(5);
  Rng rng(42);
  for (int i = 0; i < 300; ++i) {
    const auto w = testing_support::random_weights(rng, u.size(), 4);
    const auto a = testing_support::random_scenario(rng, u);
    const auto b = testing_support::random_scenario(rng, u);
    ASSERT_EQ(mu_weighted(a, b, w).value(), oracle::mu_weighted(a, b, w))
        << format_scenario(a) << " vs " << format_scenario(b);
  }
}
