#include <gtest/gtest.h>

#include <set>

#include "helpers.hpp"
#include "polex/error.hpp"
#include "polex/evaluation.hpp"
#include "polex/persistence.hpp"

using namespace polex;
using testing_support::sc;

namespace {

std::vector<std::string> formatted(const std::vector<Scenario>& v) {
  std::vector<std::string> out;
  for (const auto& s : v) out.push_back(format_scenario(s));
  return out;
}

}  // namespace

TEST(TestGeneration, DefaultSpec) {
  const auto d = testing_support::load_fixture("bob.json");
  const auto spec = default_test_spec(d, 5);
  EXPECT_EQ(spec.count, 2u);
  EXPECT_EQ(spec.max_tags, 3u);
  // Receipt appears in no row.
  EXPECT_EQ(spec.vocabulary, (std::vector<TagId>{0, 1, 2, 3}));
  // 4 + 6 + 4 scenarios of 1..3 tags, minus the 3 rows.
  EXPECT_EQ(available_test_scenarios(spec, d), 11u);
}

TEST(TestGeneration, SeededAndDistinct) {
  const auto d = testing_support::load_fixture("bob.json");
  auto spec = default_test_spec(d, 17);
  spec.count = 11;
  const auto a = generate_tests(spec, d);
  const auto b = generate_tests(spec, d);
  EXPECT_EQ(formatted(a), formatted(b));
  std::set<std::string> seen;
  for (const auto& s : a) {
    EXPECT_FALSE(d.find_row(s).has_value());
    EXPECT_LE(s.size(), 3u);
    EXPECT_TRUE(seen.insert(format_scenario(s)).second);
  }
  EXPECT_EQ(seen.size(), 11u);
  spec.count = 12;
  try {
    generate_tests(spec, d);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kExhaustedSpace);
  }
}

TEST(TestGeneration, DifferentSeedsDiffer) {
  const auto d = testing_support::load_fixture("persona_home.json");
  auto spec = default_test_spec(d, 1);
  const auto a = formatted(generate_tests(spec, d));
  spec.seed = 2;
  EXPECT_NE(a, formatted(generate_tests(spec, d)));
}

TEST(Baselines, MostFreqTieIsDeny) {
  const auto u = testing_support::universe({"A", "B"});
  std::vector<LabeledExample> tie = {{sc(u, {"A"}), Decision::kAllow}, {sc(u, {"B"}), Decision::kDeny}};
  EXPECT_EQ(mostfreq_baseline(tie), Decision::kDeny);
  tie.push_back({sc(u, {"A", "B"}), Decision::kAllow});
  EXPECT_EQ(mostfreq_baseline(tie), Decision::kAllow);
  EXPECT_THROW(mostfreq_baseline({}), Error);
}

TEST(Baselines, CoinflipIsSeeded) {
  EXPECT_EQ(coinflip_baseline(50, 4), coinflip_baseline(50, 4));
  EXPECT_NE(coinflip_baseline(50, 4), coinflip_baseline(50, 5));
}

TEST(Persona, RulePrecedence) {
  const auto u = testing_support::universe({"Home", "Work", "Secret"});
  TagRule r;
  r.unknown_if_any = {2};
  r.deny_if_any = {0};
  r.allow_if_any = {1};
  r.otherwise = Decision::kDeny;
  EXPECT_FALSE(r.label(sc(u, {"Home", "Secret"})).has_value());
  EXPECT_EQ(r.label(sc(u, {"Home", "Work"})), Decision::kDeny);
  EXPECT_EQ(r.label(sc(u, {"Work"})), Decision::kAllow);
}

TEST(Persona, LabeledTestsSkipDeclinedScenarios) {
  const auto d = testing_support::load_fixture("persona_home.json");
  Persona p;
  TagRule r;
  r.unknown_if_any = {d.universe().id_of("Receipt")};
  r.deny_if_any = {d.universe().id_of("Home")};
  p.rules["HomeNAS"] = r;
  auto spec = default_test_spec(d, 3);
  spec.count = 8;
  const auto tests = generate_labeled_tests(spec, d, p);
  ASSERT_EQ(tests.size(), 8u);
  for (const auto& t : tests) {
    EXPECT_FALSE(t.scenario.contains(d.universe().id_of("Receipt")));
    EXPECT_EQ(t.truth.at("HomeNAS"), t.scenario.contains(0) ? Decision::kDeny : Decision::kAllow);
  }
  Persona empty;
  EXPECT_THROW(generate_labeled_tests(spec, d, empty), Error);
}

TEST(RunEval, PersonaFixtureScores) {
  const auto d = testing_support::load_fixture("persona_home.json");
  const auto tests = tests_from_json(read_json_file(testing_support::fixture("persona_home_tests.json")), d);
  const auto report = run_eval(d, tests, 7);
  ASSERT_EQ(report.targets.size(), 1u);
  const auto& t = report.targets[0];
  EXPECT_EQ(t.engine, (AccuracyCount{20, 20}));
  EXPECT_EQ(t.mostfreq, (AccuracyCount{10, 20}));
  EXPECT_EQ(t.mostfreq_label, Decision::kAllow);
  EXPECT_EQ(t.training_rows, 21u);
  EXPECT_EQ(t.records.size(), 20u);
  EXPECT_EQ(report.engine_total(), t.engine);
}

TEST(RunEval, MissingTruthAndEmptyTests) {
  const auto d = testing_support::load_fixture("bob.json");
  std::vector<TestCase> tests = {{sc(d.universe(), {"Home"}), {}}};
  try {
    run_eval(d, tests, 0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kMissingGroundTruth);
    EXPECT_EQ(e.locator(), "tests[0]");
  }
  const auto empty = run_eval(d, {}, 0);
  EXPECT_EQ(empty.engine_total().total, 0u);
  EXPECT_EQ(empty.engine_total().accuracy(), 0.0);
}

TEST(RunEval, TieStatsPartitionTies) {
  const auto d = testing_support::load_fixture("bob.json");
  auto spec = default_test_spec(d, 0);
  spec.count = 11;
  Persona p;
  p.rules["WorkCloud"] = TagRule{{}, {0}, {}, Decision::kAllow};
  const auto tests = generate_labeled_tests(spec, d, p);
  const auto report = run_eval(d, tests, 0);
  const auto& ties = report.targets[0].ties;
  EXPECT_EQ(ties.no_majority, ties.resolved_by_elimination + ties.default_denied);
}
