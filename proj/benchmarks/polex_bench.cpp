#include <benchmark/benchmark.h>

#include <string>
#include <vector>

#include "polex/active_learning.hpp"
#include "polex/metric.hpp"
#include "polex/predictor.hpp"
#include "polex/random.hpp"

namespace {

polex::Universe make_universe(std::size_t n) {
  std::vector<std::string> names;
  for (std::size_t i = 0; i < n; ++i) names.push_back("t" + std::to_string(i));
  return polex::Universe::build(names);
}

polex::Scenario random_scenario(polex::Rng& rng, const polex::Universe& u, std::size_t max_tags) {
  std::vector<polex::TagId> ids;
  const std::size_t k = 1 + rng.below(max_tags);
  for (std::size_t i = 0; i < k; ++i) ids.push_back(static_cast<polex::TagId>(rng.below(u.size())));
  return polex::Scenario::from_ids(u, ids);
}

struct Instance {
  polex::Universe universe;
  std::vector<polex::LabeledExample> labeled;
  polex::WeightTable weights;
};

Instance make_instance(std::size_t tags, std::size_t rows) {
  polex::Rng rng(rows * 131 + tags);
  Instance in{make_universe(tags), {}, polex::WeightTable(tags)};
  for (polex::TagId t = 0; t < tags; ++t) in.weights.set(t, {1, 1 + rng.below(4)});
  for (std::size_t i = 0; i < rows; ++i) {
    in.labeled.push_back({random_scenario(rng, in.universe, 5),
                          rng.coin() ? polex::Decision::kAllow : polex::Decision::kDeny});
  }
  return in;
}

void BM_MuWeighted(benchmark::State& state) {
  const auto u = make_universe(static_cast<std::size_t>(state.range(0)));
  polex::Rng rng(1);
  polex::WeightTable w(u.size());
  for (polex::TagId t = 0; t < u.size(); ++t) w.set(t, {1, 1 + rng.below(5)});
  const auto a = random_scenario(rng, u, u.size());
  const auto b = random_scenario(rng, u, u.size());
  for (auto _ : state) benchmark::DoNotOptimize(polex::mu_weighted(a, b, w));
}
BENCHMARK(BM_MuWeighted)->Arg(8)->Arg(32)->Arg(128);

void BM_Predict(benchmark::State& state) {
  const auto in = make_instance(12, static_cast<std::size_t>(state.range(0)));
  polex::Rng rng(2);
  const auto q = random_scenario(rng, in.universe, 4);
  for (auto _ : state) benchmark::DoNotOptimize(polex::predict(q, in.labeled, in.weights));
}
BENCHMARK(BM_Predict)->Arg(20)->Arg(100)->Arg(500);

void BM_BuildGraph(benchmark::State& state) {
  const auto in = make_instance(12, static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(polex::NNGraph::build(in.labeled, in.weights));
}
BENCHMARK(BM_BuildGraph)->Arg(20)->Arg(100);

void BM_NextSuggestion(benchmark::State& state) {
  const auto in = make_instance(12, static_cast<std::size_t>(state.range(0)));
  const auto graph = polex::NNGraph::build(in.labeled, in.weights);
  for (auto _ : state) {
    polex::ReviewSession session("T", graph);
    benchmark::DoNotOptimize(session.next_suggestion());
  }
}
BENCHMARK(BM_NextSuggestion)->Arg(20)->Arg(100);

}  // namespace

BENCHMARK_MAIN();
