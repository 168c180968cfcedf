#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "polex/metric.hpp"
#include "polex/model.hpp"

namespace polex {

class Dataset;

// A named set of tags that share a weight.
struct TagGroup {
  std::string name;
  std::vector<TagId> members;

  friend bool operator==(const TagGroup&, const TagGroup&) = default;
};

// `lesser` ≺ `greater`: every tag of `greater` is more important.
struct OrderRelation {
  std::string lesser;
  std::string greater;

  friend bool operator==(const OrderRelation&, const OrderRelation&) = default;
};

// A partial order over tag groups. Tags not listed in any group behave as
// implicit singleton groups at the bottom level.
struct WeightConfig {
  std::vector<TagGroup> groups;
  std::vector<OrderRelation> relations;

  friend bool operator==(const WeightConfig&, const WeightConfig&) = default;
};

// Checks names, disjointness and membership against `universe`, and that
// every relation names a declared group. Does not check acyclicity.
void validate_config(const WeightConfig& config, const Universe& universe);

// Longest-chain level per declared group, in declaration order:
// level(g) = 1 + max(level(h) for h ≺ g), or 1 with nothing below.
// Throws CyclicOrder with the cycle as group names, first name repeated at the end.
std::vector<std::uint64_t> group_levels(const WeightConfig& config);

// w1(tag) = level of its group, w0 = 1.
WeightTable synthesize_weights(const WeightConfig& config, const Universe& universe);

// Per-target config if present, otherwise the global config, otherwise all (1,1).
WeightTable resolve_table(const Dataset& dataset, std::string_view target);

}  // namespace polex
