#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "polex/metric.hpp"
#include "polex/model.hpp"

namespace polex {

// All labeled examples at the single highest similarity to a query.
struct NeighborSet {
  Similarity similarity;
  std::vector<std::size_t> members;  // indices into the labeled list, ascending
};

struct Vote {
  std::size_t allow = 0;
  std::size_t deny = 0;

  std::size_t total() const noexcept { return allow + deny; }
  friend bool operator==(const Vote&, const Vote&) = default;
};

// Decision held by more than half of the voters, if any.
std::optional<Decision> strict_majority(const Vote& vote) noexcept;

Vote tally(std::span<const std::size_t> members, std::span<const LabeledExample> labeled);

enum class Provenance { kMajority, kTieBreakElimination, kDefaultDeny };

std::string_view to_string(Provenance p) noexcept;  // "majority", "tie-break", "default-deny"

struct Prediction {
  Decision decision = Decision::kDeny;
  Provenance provenance = Provenance::kDefaultDeny;
  NeighborSet neighbors;
  Vote vote;                           // over all of `neighbors`
  std::optional<std::size_t> removed;  // set for kTieBreakElimination
};

// Exhaustive argmax of mu_weighted over `labeled`, skipping `exclude`.
// Throws EmptyLabeledSet when nothing is left to compare against.
NeighborSet nearest_neighbors(const Scenario& query, std::span<const LabeledExample> labeled,
                              const WeightTable& weights,
                              std::optional<std::size_t> exclude = std::nullopt);

// Majority of N(query). On an exact tie, drops the first neighbor q (in list
// order) for which the query is not among q's own nearest neighbors, where
// q's neighbors are taken over the labeled list plus the query, minus q.
// If every neighbor is mutual the result is deny.
Prediction predict(const Scenario& query, std::span<const LabeledExample> labeled,
                   const WeightTable& weights);

}  // namespace polex
