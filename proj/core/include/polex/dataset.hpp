#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "polex/model.hpp"
#include "polex/weights.hpp"

namespace polex {

struct DatasetRow {
  Scenario scenario;
  std::vector<Decision> decisions;  // one per target, in target order

  friend bool operator==(const DatasetRow&, const DatasetRow&) = default;
};

enum class RowInsert { kInserted, kDuplicateIgnored };

// A specification dataset: labeled scenarios for every policy target plus
// the weight configurations (global and per target).
class Dataset {
 public:
  // Throws DuplicateTarget / EmptyName.
  Dataset(Universe universe, std::vector<PolicyTarget> targets);

  const Universe& universe() const noexcept { return universe_; }
  std::span<const PolicyTarget> targets() const noexcept { return targets_; }
  std::span<const DatasetRow> rows() const noexcept { return rows_; }
  std::size_t row_count() const noexcept { return rows_.size(); }

  std::optional<std::size_t> find_target(std::string_view name) const noexcept;
  // Throws UnknownTarget.
  std::size_t target_index(std::string_view name) const;

  std::optional<std::size_t> find_row(const Scenario& scenario) const;

  // Needs one decision per target. An existing scenario with the same
  // decisions is ignored; with different decisions it throws DuplicateScenario.
  RowInsert add_row(Scenario scenario, std::vector<Decision> decisions);
  void set_decision(std::size_t row, std::size_t target, Decision decision);

  const std::optional<WeightConfig>& global_weights() const noexcept { return global_weights_; }
  const WeightConfig* target_weights(std::size_t target) const;
  // Both validate against the universe and reject cyclic orders.
  void set_global_weights(std::optional<WeightConfig> config);
  void set_target_weights(std::size_t target, std::optional<WeightConfig> config);

  friend bool operator==(const Dataset& a, const Dataset& b);

 private:
  Universe universe_;
  std::vector<PolicyTarget> targets_;
  std::vector<DatasetRow> rows_;
  std::map<Scenario, std::size_t> row_index_;
  std::optional<WeightConfig> global_weights_;
  std::map<std::size_t, WeightConfig> target_weights_;
};

// One LabeledExample per row, in row order. Throws UnknownTarget.
std::vector<LabeledExample> per_target_view(const Dataset& dataset, std::string_view target);
std::vector<LabeledExample> per_target_view(const Dataset& dataset, std::size_t target);

}  // namespace polex
