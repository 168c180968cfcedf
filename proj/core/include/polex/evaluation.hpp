#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "polex/dataset.hpp"
#include "polex/model.hpp"
#include "polex/predictor.hpp"

namespace polex {

// Parameters for random test-scenario generation.
struct TestScenarioSpec {
  std::size_t count = 1;
  std::size_t max_tags = 3;
  std::uint64_t seed = 0;
  std::vector<TagId> vocabulary;  // tags the generator may draw from
};

// count = ceil(rows / 2) (at least 1), max_tags = 3, vocabulary = every tag
// used by at least one row.
TestScenarioSpec default_test_spec(const Dataset& dataset, std::uint64_t seed);

// Number of distinct scenarios of 1..max_tags vocabulary tags that are not
// already rows of the dataset (saturates at UINT64_MAX).
std::uint64_t available_test_scenarios(const TestScenarioSpec& spec, const Dataset& dataset);

// Seeded sampling: size uniform in [1, min(max_tags, |vocabulary|)], tags
// drawn without replacement, duplicates of training rows or earlier outputs
// rejected. Throws ExhaustedSpace when `count` exceeds the available space.
std::vector<Scenario> generate_tests(const TestScenarioSpec& spec, const Dataset& dataset);

// Fair coin per test, seeded. 1 = allow.
std::vector<Decision> coinflip_baseline(std::size_t count, std::uint64_t seed);

// Majority label of the training examples; an exact tie is deny.
// Throws EmptyLabeledSet.
Decision mostfreq_baseline(std::span<const LabeledExample> labeled);

// A deterministic labeling rule for synthetic evaluations. Precedence:
// any `unknown_if_any` tag -> no label; any `deny_if_any` tag -> deny;
// any `allow_if_any` tag -> allow; otherwise `otherwise`.
struct TagRule {
  std::vector<TagId> unknown_if_any;
  std::vector<TagId> deny_if_any;
  std::vector<TagId> allow_if_any;
  Decision otherwise = Decision::kAllow;

  std::optional<Decision> label(const Scenario& scenario) const;
};

// One rule per target name.
struct Persona {
  std::map<std::string, TagRule> rules;
};

struct TestCase {
  Scenario scenario;
  std::map<std::string, Decision> truth;  // per target name
};

// Generates `spec.count` scenarios the persona can label for every target of
// the dataset. Scenarios it declines are dropped and replaced by fresh draws.
std::vector<TestCase> generate_labeled_tests(const TestScenarioSpec& spec, const Dataset& dataset,
                                             const Persona& persona);

struct AccuracyCount {
  std::size_t correct = 0;
  std::size_t total = 0;

  double accuracy() const noexcept {
    return total == 0 ? 0.0 : static_cast<double>(correct) / static_cast<double>(total);
  }
  friend bool operator==(const AccuracyCount&, const AccuracyCount&) = default;
};

struct TieStats {
  std::size_t no_majority = 0;              // exact ties in N(p)
  std::size_t resolved_by_elimination = 0;  // ties settled by dropping a non-mutual neighbor
  std::size_t default_denied = 0;           // ties where every neighbor was mutual

  friend bool operator==(const TieStats&, const TieStats&) = default;
};

struct EvalRecord {
  Scenario query;
  Prediction prediction;
  Decision truth = Decision::kDeny;
  Decision coinflip = Decision::kDeny;
};

struct TargetReport {
  std::string target;
  std::size_t training_rows = 0;
  AccuracyCount engine;
  AccuracyCount coinflip;
  AccuracyCount mostfreq;
  Decision mostfreq_label = Decision::kDeny;
  TieStats ties;
  std::vector<EvalRecord> records;
};

struct EvalReport {
  std::uint64_t seed = 0;
  std::size_t test_count = 0;
  std::vector<TargetReport> targets;  // dataset target order

  // Sums over targets.
  AccuracyCount engine_total() const;
  AccuracyCount coinflip_total() const;
  AccuracyCount mostfreq_total() const;
};

// Scores the nearest-neighbor engine and both baselines for every target on
// the same test list. Each target's coin flips use derive_seed(seed, target).
// Throws MissingGroundTruth if a test lacks a decision for some target.
EvalReport run_eval(const Dataset& dataset, std::span<const TestCase> tests, std::uint64_t seed);

}  // namespace polex
