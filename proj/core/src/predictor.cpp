#include "polex/predictor.hpp"

#include "polex/error.hpp"

namespace polex {

std::optional<Decision> strict_majority(const Vote& vote) noexcept {
  if (vote.allow > vote.deny) return Decision::kAllow;
  if (vote.deny > vote.allow) return Decision::kDeny;
  return std::nullopt;
}

Vote tally(std::span<const std::size_t> members, std::span<const LabeledExample> labeled) {
  Vote vote;
  for (std::size_t i : members) {
    if (labeled[i].decision == Decision::kAllow) {
      ++vote.allow;
    } else {
      ++vote.deny;
    }
  }
  return vote;
}

std::string_view to_string(Provenance p) noexcept {
  switch (p) {
    case Provenance::kMajority: return "majority";
    case Provenance::kTieBreakElimination: return "tie-break";
    case Provenance::kDefaultDeny: return "default-deny";
  }
  return "unknown";
}

NeighborSet nearest_neighbors(const Scenario& query, std::span<const LabeledExample> labeled,
                              const WeightTable& weights, std::optional<std::size_t> exclude) {
  NeighborSet best;
  bool found = false;
  for (std::size_t i = 0; i < labeled.size(); ++i) {
    if (exclude && *exclude == i) continue;
    Similarity s = mu_weighted(query, labeled[i].scenario, weights);
    if (!found || s > best.similarity) {
      best.similarity = std::move(s);
      best.members.assign(1, i);
      found = true;
    } else if (s == best.similarity) {
      best.members.push_back(i);
    }
  }
  if (!found) throw Error(ErrorCode::kEmptyLabeledSet, "no labeled examples to compare against");
  return best;
}

namespace {

// Whether `query` is among the nearest neighbors of labeled[q] when the
// candidates are (labeled ∪ {query}) \ {labeled[q]}.
bool is_mutual(const Scenario& query, std::size_t q, std::span<const LabeledExample> labeled,
               const WeightTable& weights) {
  const Scenario& center = labeled[q].scenario;
  const Similarity to_query = mu_weighted(center, query, weights);
  for (std::size_t i = 0; i < labeled.size(); ++i) {
    if (i == q) continue;
    if (mu_weighted(center, labeled[i].scenario, weights) > to_query) return false;
  }
  return true;
}

}  // namespace

Prediction predict(const Scenario& query, std::span<const LabeledExample> labeled,
                   const WeightTable& weights) {
  Prediction out;
  out.neighbors = nearest_neighbors(query, labeled, weights);
  out.vote = tally(out.neighbors.members, labeled);

  if (auto majority = strict_majority(out.vote)) {
    out.decision = *majority;
    out.provenance = Provenance::kMajority;
    return out;
  }

  // Binary labels on an exact tie: removing any single member leaves a strict majority.
  for (std::size_t q : out.neighbors.members) {
    if (is_mutual(query, q, labeled, weights)) continue;
    out.removed = q;
    out.provenance = Provenance::kTieBreakElimination;
    out.decision = flip(labeled[q].decision);
    return out;
  }

  out.decision = Decision::kDeny;
  out.provenance = Provenance::kDefaultDeny;
  return out;
}

}  // namespace polex
