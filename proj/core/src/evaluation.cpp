#include "polex/evaluation.hpp"

#include <algorithm>
#include <limits>
#include <set>

#include "polex/error.hpp"
#include "polex/metric.hpp"
#include "polex/random.hpp"
#include "polex/weights.hpp"

namespace polex {

namespace {

constexpr std::uint64_t kSaturated = std::numeric_limits<std::uint64_t>::max();

std::uint64_t sat_add(std::uint64_t a, std::uint64_t b) {
  return a > kSaturated - b ? kSaturated : a + b;
}

// C(n, k) saturating at UINT64_MAX.
std::uint64_t choose(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  BigInt r = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    r = r * (n - k + i) / i;
    if (r > kSaturated) return kSaturated;
  }
  return static_cast<std::uint64_t>(r);
}

std::vector<TagId> canonical_vocabulary(const TestScenarioSpec& spec, const Universe& universe) {
  std::vector<TagId> vocab = spec.vocabulary;
  std::sort(vocab.begin(), vocab.end());
  vocab.erase(std::unique(vocab.begin(), vocab.end()), vocab.end());
  for (TagId id : vocab) {
    if (id >= universe.size()) throw Error(ErrorCode::kUnknownTag, "vocabulary id " + std::to_string(id));
  }
  return vocab;
}

// Draws distinct scenarios not in the training set until the space runs out.
class TestGenerator {
 public:
  TestGenerator(const TestScenarioSpec& spec, const Dataset& dataset)
      : dataset_(dataset),
        vocab_(canonical_vocabulary(spec, dataset.universe())),
        max_size_(std::min(spec.max_tags, vocab_.size())),
        rng_(spec.seed),
        available_(available_test_scenarios(spec, dataset)) {
    if (vocab_.empty()) throw Error(ErrorCode::kInvalidArgument, "test vocabulary is empty");
    if (spec.max_tags == 0) throw Error(ErrorCode::kInvalidArgument, "max_tags must be at least 1");
  }

  std::uint64_t available() const noexcept { return available_; }

  Scenario next() {
    if (used_.size() >= available_) {
      throw Error(ErrorCode::kExhaustedSpace,
                  "only " + std::to_string(available_) + " distinct test scenarios exist");
    }
    // Rejection sampling; the budget only runs out when the space is nearly used up.
    const std::size_t budget = 64 * (used_.size() + 1) + 1024;
    for (std::size_t attempt = 0; attempt < budget; ++attempt) {
      Scenario s = draw();
      if (accept(s)) return s;
    }
    return pick_remaining();
  }

 private:
  Scenario draw() {
    const std::size_t size = 1 + static_cast<std::size_t>(rng_.below(max_size_));
    std::vector<TagId> pool = vocab_;
    for (std::size_t i = 0; i < size; ++i) {
      const std::size_t j = i + static_cast<std::size_t>(rng_.below(pool.size() - i));
      std::swap(pool[i], pool[j]);
    }
    pool.resize(size);
    return Scenario::from_ids(dataset_.universe(), std::move(pool));
  }

  bool accept(const Scenario& s) {
    if (dataset_.find_row(s) || used_.count(s) != 0) return false;
    used_.insert(s);
    return true;
  }

  // Uniform choice among the scenarios not yet used, in canonical order.
  Scenario pick_remaining() {
    constexpr std::uint64_t kEnumerationLimit = 1u << 20;
    std::uint64_t space = 0;
    for (std::size_t k = 1; k <= max_size_; ++k) space = sat_add(space, choose(vocab_.size(), k));
    if (space > kEnumerationLimit) {
      throw Error(ErrorCode::kExhaustedSpace, "rejection budget exhausted");
    }
    std::vector<Scenario> remaining;
    std::vector<std::size_t> idx;
    for (std::size_t k = 1; k <= max_size_; ++k) {
      idx.resize(k);
      for (std::size_t i = 0; i < k; ++i) idx[i] = i;
      for (;;) {
        std::vector<TagId> ids;
        for (std::size_t i : idx) ids.push_back(vocab_[i]);
        Scenario s = Scenario::from_ids(dataset_.universe(), std::move(ids));
        if (!dataset_.find_row(s) && used_.count(s) == 0) remaining.push_back(std::move(s));
        // Next k-combination in lexicographic order.
        std::size_t i = k;
        while (i > 0 && idx[i - 1] == vocab_.size() - k + i - 1) --i;
        if (i == 0) break;
        ++idx[i - 1];
        for (std::size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
      }
    }
    if (remaining.empty()) throw Error(ErrorCode::kExhaustedSpace, "no scenarios left");
    Scenario s = remaining[static_cast<std::size_t>(rng_.below(remaining.size()))];
    used_.insert(s);
    return s;
  }

  const Dataset& dataset_;
  std::vector<TagId> vocab_;
  std::size_t max_size_;
  Rng rng_;
  std::uint64_t available_;
  std::set<Scenario> used_;
};

bool any_member(const Scenario& s, const std::vector<TagId>& ids) {
  return std::any_of(ids.begin(), ids.end(), [&](TagId id) { return s.contains(id); });
}

}  // namespace

TestScenarioSpec default_test_spec(const Dataset& dataset, std::uint64_t seed) {
  TestScenarioSpec spec;
  spec.count = std::max<std::size_t>(1, (dataset.row_count() + 1) / 2);
  spec.max_tags = 3;
  spec.seed = seed;
  std::set<TagId> used;
  for (const auto& row : dataset.rows()) used.insert(row.scenario.members().begin(), row.scenario.members().end());
  spec.vocabulary.assign(used.begin(), used.end());
  return spec;
}

std::uint64_t available_test_scenarios(const TestScenarioSpec& spec, const Dataset& dataset) {
  const auto vocab = canonical_vocabulary(spec, dataset.universe());
  const std::size_t max_size = std::min(spec.max_tags, vocab.size());
  std::uint64_t total = 0;
  for (std::size_t k = 1; k <= max_size; ++k) total = sat_add(total, choose(vocab.size(), k));
  if (total == kSaturated) return total;
  for (const auto& row : dataset.rows()) {
    const auto members = row.scenario.members();
    if (members.size() > max_size) continue;
    if (std::includes(vocab.begin(), vocab.end(), members.begin(), members.end())) --total;
  }
  return total;
}

std::vector<Scenario> generate_tests(const TestScenarioSpec& spec, const Dataset& dataset) {
  TestGenerator gen(spec, dataset);
  if (spec.count > gen.available()) {
    throw Error(ErrorCode::kExhaustedSpace,
                "requested " + std::to_string(spec.count) + " scenarios but only " +
                    std::to_string(gen.available()) + " are available");
  }
  std::vector<Scenario> out;
  out.reserve(spec.count);
  for (std::size_t i = 0; i < spec.count; ++i) out.push_back(gen.next());
  return out;
}

std::vector<Decision> coinflip_baseline(std::size_t count, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<Decision> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) out.push_back(rng.coin() ? Decision::kAllow : Decision::kDeny);
  return out;
}

Decision mostfreq_baseline(std::span<const LabeledExample> labeled) {
  if (labeled.empty()) throw Error(ErrorCode::kEmptyLabeledSet, "no training examples");
  std::size_t allow = 0;
  for (const auto& ex : labeled) allow += ex.decision == Decision::kAllow ? 1 : 0;
  return 2 * allow > labeled.size() ? Decision::kAllow : Decision::kDeny;
}

std::optional<Decision> TagRule::label(const Scenario& scenario) const {
  if (any_member(scenario, unknown_if_any)) return std::nullopt;
  if (any_member(scenario, deny_if_any)) return Decision::kDeny;
  if (any_member(scenario, allow_if_any)) return Decision::kAllow;
  return otherwise;
}

std::vector<TestCase> generate_labeled_tests(const TestScenarioSpec& spec, const Dataset& dataset,
                                             const Persona& persona) {
  for (const auto& target : dataset.targets()) {
    if (persona.rules.count(target.name) == 0) {
      throw Error(ErrorCode::kMissingGroundTruth, "persona has no rule for target", target.name);
    }
  }
  TestGenerator gen(spec, dataset);
  std::vector<TestCase> out;
  out.reserve(spec.count);
  while (out.size() < spec.count) {
    TestCase tc{gen.next(), {}};
    bool declined = false;
    for (const auto& target : dataset.targets()) {
      auto d = persona.rules.at(target.name).label(tc.scenario);
      if (!d) {
        declined = true;
        break;
      }
      tc.truth.emplace(target.name, *d);
    }
    if (!declined) out.push_back(std::move(tc));
  }
  return out;
}

namespace {

AccuracyCount sum(const std::vector<TargetReport>& targets, AccuracyCount TargetReport::*field) {
  AccuracyCount total;
  for (const auto& t : targets) {
    total.correct += (t.*field).correct;
    total.total += (t.*field).total;
  }
  return total;
}

}  // namespace

AccuracyCount EvalReport::engine_total() const { return sum(targets, &TargetReport::engine); }
AccuracyCount EvalReport::coinflip_total() const { return sum(targets, &TargetReport::coinflip); }
AccuracyCount EvalReport::mostfreq_total() const { return sum(targets, &TargetReport::mostfreq); }

EvalReport run_eval(const Dataset& dataset, std::span<const TestCase> tests, std::uint64_t seed) {
  for (std::size_t i = 0; i < tests.size(); ++i) {
    for (const auto& target : dataset.targets()) {
      if (tests[i].truth.count(target.name) == 0) {
        throw Error(ErrorCode::kMissingGroundTruth, "no decision for target '" + target.name + "'",
                    "tests[" + std::to_string(i) + "]");
      }
    }
  }

  EvalReport report;
  report.seed = seed;
  report.test_count = tests.size();
  for (std::size_t t = 0; t < dataset.targets().size(); ++t) {
    const std::string& name = dataset.targets()[t].name;
    TargetReport tr;
    tr.target = name;
    tr.training_rows = dataset.row_count();
    if (tests.empty()) {
      report.targets.push_back(std::move(tr));
      continue;
    }
    const auto labeled = per_target_view(dataset, t);
    const WeightTable weights = resolve_table(dataset, name);
    tr.mostfreq_label = mostfreq_baseline(labeled);
    const auto coins = coinflip_baseline(tests.size(), derive_seed(seed, t));

    for (std::size_t i = 0; i < tests.size(); ++i) {
      const Decision truth = tests[i].truth.at(name);
      EvalRecord rec{tests[i].scenario, predict(tests[i].scenario, labeled, weights), truth, coins[i]};

      tr.engine.correct += rec.prediction.decision == truth ? 1 : 0;
      tr.coinflip.correct += coins[i] == truth ? 1 : 0;
      tr.mostfreq.correct += tr.mostfreq_label == truth ? 1 : 0;
      if (rec.prediction.provenance != Provenance::kMajority) ++tr.ties.no_majority;
      if (rec.prediction.provenance == Provenance::kTieBreakElimination) ++tr.ties.resolved_by_elimination;
      if (rec.prediction.provenance == Provenance::kDefaultDeny) ++tr.ties.default_denied;
      tr.records.push_back(std::move(rec));
    }
    tr.engine.total = tr.coinflip.total = tr.mostfreq.total = tests.size();
    report.targets.push_back(std::move(tr));
  }
  return report;
}

}  // namespace polex
