#include "polex/dataset.hpp"

#include <unordered_set>

#include "polex/error.hpp"

namespace polex {

Dataset::Dataset(Universe universe, std::vector<PolicyTarget> targets)
    : universe_(std::move(universe)), targets_(std::move(targets)) {
  std::unordered_set<std::string> seen;
  for (std::size_t i = 0; i < targets_.size(); ++i) {
    const auto& name = targets_[i].name;
    if (name.empty()) {
      throw Error(ErrorCode::kEmptyName, "target names must be non-empty",
                  "targets[" + std::to_string(i) + "]");
    }
    if (!seen.insert(name).second) throw Error(ErrorCode::kDuplicateTarget, name);
  }
}

std::optional<std::size_t> Dataset::find_target(std::string_view name) const noexcept {
  for (std::size_t i = 0; i < targets_.size(); ++i) {
    if (targets_[i].name == name) return i;
  }
  return std::nullopt;
}

std::size_t Dataset::target_index(std::string_view name) const {
  if (auto t = find_target(name)) return *t;
  throw Error(ErrorCode::kUnknownTarget, std::string(name));
}

std::optional<std::size_t> Dataset::find_row(const Scenario& scenario) const {
  auto it = row_index_.find(scenario);
  if (it == row_index_.end()) return std::nullopt;
  return it->second;
}

RowInsert Dataset::add_row(Scenario scenario, std::vector<Decision> decisions) {
  const std::string where = "rows[" + std::to_string(rows_.size()) + "]";
  if (!scenario.universe().same_as(universe_)) {
    throw Error(ErrorCode::kUniverseMismatch, "scenario is not from this dataset's universe", where);
  }
  if (decisions.size() != targets_.size()) {
    throw Error(ErrorCode::kMissingDecision,
                "expected " + std::to_string(targets_.size()) + " decisions, got " +
                    std::to_string(decisions.size()),
                where);
  }
  if (auto existing = find_row(scenario)) {
    const auto& row = rows_[*existing];
    if (row.decisions == decisions) return RowInsert::kDuplicateIgnored;
    throw Error(ErrorCode::kDuplicateScenario,
                "scenario '" + format_scenario(scenario) + "' conflicts with rows[" +
                    std::to_string(*existing) + "]",
                where);
  }
  row_index_.emplace(scenario, rows_.size());
  rows_.push_back(DatasetRow{std::move(scenario), std::move(decisions)});
  return RowInsert::kInserted;
}

void Dataset::set_decision(std::size_t row, std::size_t target, Decision decision) {
  if (row >= rows_.size() || target >= targets_.size()) {
    throw Error(ErrorCode::kInvalidArgument, "row or target index out of range");
  }
  rows_[row].decisions[target] = decision;
}

const WeightConfig* Dataset::target_weights(std::size_t target) const {
  auto it = target_weights_.find(target);
  return it == target_weights_.end() ? nullptr : &it->second;
}

void Dataset::set_global_weights(std::optional<WeightConfig> config) {
  if (config) {
    validate_config(*config, universe_);
    group_levels(*config);
  }
  global_weights_ = std::move(config);
}

void Dataset::set_target_weights(std::size_t target, std::optional<WeightConfig> config) {
  if (target >= targets_.size()) throw Error(ErrorCode::kUnknownTarget, std::to_string(target));
  if (!config) {
    target_weights_.erase(target);
    return;
  }
  validate_config(*config, universe_);
  group_levels(*config);
  target_weights_[target] = std::move(*config);
}

bool operator==(const Dataset& a, const Dataset& b) {
  return a.universe_ == b.universe_ && a.targets_ == b.targets_ && a.rows_ == b.rows_ &&
         a.global_weights_ == b.global_weights_ && a.target_weights_ == b.target_weights_;
}

std::vector<LabeledExample> per_target_view(const Dataset& dataset, std::size_t target) {
  if (target >= dataset.targets().size()) {
    throw Error(ErrorCode::kUnknownTarget, std::to_string(target));
  }
  std::vector<LabeledExample> out;
  out.reserve(dataset.row_count());
  for (const auto& row : dataset.rows()) out.push_back({row.scenario, row.decisions[target]});
  return out;
}

std::vector<LabeledExample> per_target_view(const Dataset& dataset, std::string_view target) {
  return per_target_view(dataset, dataset.target_index(target));
}

}  // namespace polex
