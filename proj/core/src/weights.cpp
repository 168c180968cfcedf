#include "polex/weights.hpp"

#include <algorithm>
#include <unordered_map>
#include <unordered_set>

#include "polex/dataset.hpp"
#include "polex/error.hpp"

namespace polex {

namespace {

std::unordered_map<std::string, std::size_t> index_groups(const WeightConfig& config) {
  std::unordered_map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < config.groups.size(); ++i) {
    const auto& name = config.groups[i].name;
    if (name.empty()) {
      throw Error(ErrorCode::kInvalidWeightConfig, "group names must be non-empty",
                  "groups[" + std::to_string(i) + "]");
    }
    if (!index.emplace(name, i).second) {
      throw Error(ErrorCode::kInvalidWeightConfig, "duplicate group '" + name + "'",
                  "groups[" + std::to_string(i) + "]");
    }
  }
  return index;
}

std::size_t lookup(const std::unordered_map<std::string, std::size_t>& index,
                   const std::string& name, std::size_t relation) {
  auto it = index.find(name);
  if (it == index.end()) {
    throw Error(ErrorCode::kUnknownGroupInRelation, name,
                "relations[" + std::to_string(relation) + "]");
  }
  return it->second;
}

}  // namespace

void validate_config(const WeightConfig& config, const Universe& universe) {
  const auto index = index_groups(config);
  std::unordered_set<TagId> seen;
  for (std::size_t g = 0; g < config.groups.size(); ++g) {
    const auto& group = config.groups[g];
    const std::string where = "groups[" + std::to_string(g) + "]";
    if (group.members.empty()) {
      throw Error(ErrorCode::kInvalidWeightConfig, "group '" + group.name + "' is empty", where);
    }
    for (TagId id : group.members) {
      if (id >= universe.size()) {
        throw Error(ErrorCode::kUnknownTag, "tag id " + std::to_string(id), where);
      }
      if (!seen.insert(id).second) {
        throw Error(ErrorCode::kInvalidWeightConfig,
                    "tag '" + universe.name(id) + "' belongs to more than one group", where);
      }
    }
  }
  for (std::size_t r = 0; r < config.relations.size(); ++r) {
    lookup(index, config.relations[r].lesser, r);
    lookup(index, config.relations[r].greater, r);
  }
}

std::vector<std::uint64_t> group_levels(const WeightConfig& config) {
  const auto index = index_groups(config);
  const std::size_t n = config.groups.size();

  // below[g] lists groups h with h ≺ g; edges for cycle search run lesser -> greater.
  std::vector<std::vector<std::size_t>> below(n);
  std::vector<std::vector<std::size_t>> above(n);
  for (std::size_t r = 0; r < config.relations.size(); ++r) {
    const std::size_t lo = lookup(index, config.relations[r].lesser, r);
    const std::size_t hi = lookup(index, config.relations[r].greater, r);
    if (lo == hi) {
      throw Error(ErrorCode::kCyclicOrder, "group '" + config.groups[lo].name + "' related to itself",
                  "relations[" + std::to_string(r) + "]",
                  {config.groups[lo].name, config.groups[lo].name});
    }
    below[hi].push_back(lo);
    above[lo].push_back(hi);
  }

  // Iterative DFS along lesser -> greater edges. Colors: 0 new, 1 on stack, 2 done.
  std::vector<int> color(n, 0);
  std::vector<std::uint64_t> level(n, 0);
  for (std::size_t root = 0; root < n; ++root) {
    if (color[root] != 0) continue;
    std::vector<std::pair<std::size_t, std::size_t>> stack{{root, 0}};
    color[root] = 1;
    while (!stack.empty()) {
      auto& [node, next] = stack.back();
      if (next < above[node].size()) {
        const std::size_t succ = above[node][next++];
        if (color[succ] == 1) {
          std::vector<std::string> path;
          auto it = std::find_if(stack.begin(), stack.end(),
                                 [succ](const auto& frame) { return frame.first == succ; });
          for (; it != stack.end(); ++it) path.push_back(config.groups[it->first].name);
          path.push_back(config.groups[succ].name);
          std::string text;
          for (const auto& name : path) text += (text.empty() ? "" : " -> ") + name;
          throw Error(ErrorCode::kCyclicOrder, text, {}, std::move(path));
        }
        if (color[succ] == 0) {
          color[succ] = 1;
          stack.emplace_back(succ, 0);
        }
      } else {
        color[node] = 2;
        stack.pop_back();
      }
    }
  }

  // Acyclic: resolve levels with memoized recursion over `below`, iteratively.
  std::vector<std::size_t> order;
  order.reserve(n);
  std::vector<int> state(n, 0);
  for (std::size_t root = 0; root < n; ++root) {
    if (state[root] != 0) continue;
    std::vector<std::pair<std::size_t, std::size_t>> stack{{root, 0}};
    state[root] = 1;
    while (!stack.empty()) {
      auto& [node, next] = stack.back();
      if (next < below[node].size()) {
        const std::size_t pred = below[node][next++];
        if (state[pred] == 0) {
          state[pred] = 1;
          stack.emplace_back(pred, 0);
        }
      } else {
        order.push_back(node);
        stack.pop_back();
      }
    }
  }
  for (std::size_t g : order) {
    std::uint64_t best = 0;
    for (std::size_t h : below[g]) best = std::max(best, level[h]);
    level[g] = best + 1;
  }
  return level;
}

WeightTable synthesize_weights(const WeightConfig& config, const Universe& universe) {
  validate_config(config, universe);
  const auto levels = group_levels(config);
  WeightTable table(universe.size());
  for (std::size_t g = 0; g < config.groups.size(); ++g) {
    for (TagId id : config.groups[g].members) table.set(id, WeightPair{1, levels[g]});
  }
  return table;
}

WeightTable resolve_table(const Dataset& dataset, std::string_view target) {
  const std::size_t t = dataset.target_index(target);
  if (const WeightConfig* config = dataset.target_weights(t)) {
    return synthesize_weights(*config, dataset.universe());
  }
  if (const auto& global = dataset.global_weights()) {
    return synthesize_weights(*global, dataset.universe());
  }
  return WeightTable::uniform(dataset.universe().size());
}

}  // namespace polex
