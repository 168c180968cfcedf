#include <gtest/gtest.h>

#include "helpers.hpp"
#include "polex/error.hpp"
#include "polex/model.hpp"

using namespace polex;
using testing_support::sc;
using testing_support::universe;

namespace {

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no polex::Error thrown";
  return ErrorCode::kIoError;
}

}  // namespace

TEST(Universe, IdsFollowDeclarationOrder) {
  const auto u = universe({"Home", "Work", "Photo"});
  ASSERT_EQ(u.size(), 3u);
  EXPECT_EQ(u.id_of("Home"), 0u);
  EXPECT_EQ(u.id_of("Photo"), 2u);
  EXPECT_EQ(u.name(1), "Work");
  EXPECT_FALSE(u.find("Memo").has_value());
}

TEST(Universe, RejectsBadNames) {
  EXPECT_EQ(code_of([] { universe({}); }), ErrorCode::kEmptyUniverse);
  EXPECT_EQ(code_of([] { universe({"A", "A"}); }), ErrorCode::kDuplicateTag);
  EXPECT_EQ(code_of([] { universe({""}); }), ErrorCode::kEmptyName);
  EXPECT_EQ(code_of([] { universe({"A+B"}); }), ErrorCode::kInvalidTagName);
  EXPECT_EQ(code_of([] { universe({"A,B"}); }), ErrorCode::kInvalidTagName);
  EXPECT_EQ(code_of([] { universe({" A"}); }), ErrorCode::kInvalidTagName);
}

TEST(Universe, StructuralEquality) {
  EXPECT_EQ(universe({"A", "B"}), universe({"A", "B"}));
  EXPECT_FALSE(universe({"A", "B"}) == universe({"B", "A"}));
}

TEST(Scenario, CanonicalizesMembers) {
  const auto u = universe({"Home", "Work", "Photo"});
  const auto s = Scenario::from_ids(u, {2, 0, 2});
  ASSERT_EQ(s.size(), 2u);
  EXPECT_EQ(s.members()[0], 0u);
  EXPECT_EQ(s.members()[1], 2u);
  EXPECT_TRUE(s.contains(2));
  EXPECT_FALSE(s.contains(1));
  EXPECT_EQ(s, sc(u, {"Photo", "Home"}));
  EXPECT_EQ(format_scenario(s), "Home+Photo");
  EXPECT_EQ(format_scenario(s, ","), "Home,Photo");
}

TEST(Scenario, RejectsEmptyAndUnknown) {
  const auto u = universe({"Home"});
  EXPECT_EQ(code_of([&] { Scenario::from_ids(u, {}); }), ErrorCode::kEmptyScenario);
  EXPECT_EQ(code_of([&] { Scenario::from_ids(u, {3}); }), ErrorCode::kUnknownTag);
  EXPECT_EQ(code_of([&] { parse_scenario(u, "Home+Nope"); }), ErrorCode::kUnknownTag);
}

TEST(Scenario, ParseToleratesSpaces) {
  const auto u = universe({"Home", "Photo"});
  EXPECT_EQ(parse_scenario(u, " Photo + Home "), sc(u, {"Home", "Photo"}));
}

TEST(Decision, Conversions) {
  EXPECT_EQ(flip(Decision::kAllow), Decision::kDeny);
  EXPECT_EQ(to_int(Decision::kAllow), 1);
  EXPECT_EQ(to_string(Decision::kDeny), "deny");
  EXPECT_EQ(decision_from_int(0), Decision::kDeny);
  EXPECT_EQ(code_of([] { decision_from_int(2); }), ErrorCode::kValidationError);
}

TEST(Error, MessageCarriesCodeAndLocator) {
  const Error e(ErrorCode::kUnknownTag, "Memo", "rows[3].scenario");
  EXPECT_EQ(std::string(e.what()), "UnknownTag: Memo (at rows[3].scenario)");
  EXPECT_EQ(e.detail(), "Memo");
  EXPECT_EQ(to_string(ErrorCode::kCyclicOrder), "CyclicOrder");
}
