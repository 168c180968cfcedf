#pragma once

#include <filesystem>
#include <initializer_list>
#include <string>
#include <vector>

#include "polex/dataset.hpp"
#include "polex/model.hpp"
#include "polex/persistence.hpp"
#include "polex/random.hpp"

namespace testing_support {

inline std::filesystem::path fixture(const std::string& name) {
  return std::filesystem::path(POLEX_FIXTURES_DIR) / name;
}

inline polex::Dataset load_fixture(const std::string& name) {
  return polex::load_dataset(fixture(name));
}

inline polex::Universe universe(std::initializer_list<const char*> names) {
  std::vector<std::string> v(names.begin(), names.end());
  return polex::Universe::build(v);
}

inline polex::Scenario sc(const polex::Universe& u, std::initializer_list<const char*> names) {
  std::vector<std::string> v(names.begin(), names.end());
  return polex::make_scenario(u, v);
}

inline polex::Universe numbered_universe(std::size_t n) {
  std::vector<std::string> names;
  for (std::size_t i = 0; i < n; ++i) names.push_back("t" + std::to_string(i));
  return polex::Universe::build(names);
}

// Non-empty random subset of the universe's tags.
inline polex::Scenario random_scenario(polex::Rng& rng, const polex::Universe& u) {
  std::vector<polex::TagId> ids;
  while (ids.empty()) {
    for (polex::TagId t = 0; t < u.size(); ++t) {
      if (rng.coin()) ids.push_back(t);
    }
  }
  return polex::Scenario::from_ids(u, ids);
}

// Up to `count` distinct random scenarios with random labels.
inline std::vector<polex::LabeledExample> random_examples(polex::Rng& rng, const polex::Universe& u,
                                                          std::size_t count) {
  std::vector<polex::LabeledExample> out;
  for (std::size_t attempt = 0; out.size() < count && attempt < 50 * count; ++attempt) {
    polex::Scenario s = random_scenario(rng, u);
    bool fresh = true;
    for (const auto& ex : out) fresh = fresh && !(ex.scenario == s);
    if (fresh) out.push_back({s, rng.coin() ? polex::Decision::kAllow : polex::Decision::kDeny});
  }
  return out;
}

inline polex::WeightTable random_weights(polex::Rng& rng, std::size_t tags, std::uint64_t max_w1) {
  polex::WeightTable w(tags);
  for (polex::TagId t = 0; t < tags; ++t) w.set(t, {1, 1 + rng.below(max_w1)});
  return w;
}

}  // namespace testing_support
