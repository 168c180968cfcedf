#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "polex/metric.hpp"
#include "polex/model.hpp"
#include "polex/predictor.hpp"

namespace polex {

class Dataset;

// Nearest-neighbor graph over one target's labeled examples. Vertex v points
// at N(v), computed over every other vertex. Edges depend on scenarios and
// weights only; labels can change without touching them.
class NNGraph {
 public:
  // Throws TooFewExamples for fewer than two examples.
  static NNGraph build(std::span<const LabeledExample> labeled, const WeightTable& weights);

  std::size_t size() const noexcept { return scenarios_.size(); }
  const Scenario& scenario(std::size_t v) const { return scenarios_.at(v); }
  Decision label(std::size_t v) const { return labels_.at(v); }
  std::span<const Decision> labels() const noexcept { return labels_; }
  const NeighborSet& neighbors(std::size_t v) const { return adjacency_.at(v); }

  void set_label(std::size_t v, Decision d) { labels_.at(v) = d; }

  // True when both graphs have identical scenarios and edges (labels ignored).
  bool same_edges(const NNGraph& other) const;

 private:
  std::vector<Scenario> scenarios_;
  std::vector<Decision> labels_;
  std::vector<NeighborSet> adjacency_;
};

inline NNGraph build_graph(std::span<const LabeledExample> labeled, const WeightTable& weights) {
  return NNGraph::build(labeled, weights);
}

enum class ViolationKind { kNoMajority, kDisagreesWithMajority };

std::string_view to_string(ViolationKind kind) noexcept;

struct Violation {
  std::size_t vertex = 0;
  ViolationKind kind = ViolationKind::kNoMajority;

  friend bool operator==(const Violation&, const Violation&) = default;
};

// At most one entry per vertex, in vertex order. A vertex whose neighbors
// have no strict majority is kNoMajority; otherwise it is
// kDisagreesWithMajority when its own label differs from that majority.
std::vector<Violation> violations(const NNGraph& graph);
std::size_t violation_count(const NNGraph& graph);

// Decrease in violation_count when v's label is flipped (may be <= 0).
std::int64_t flip_gain(const NNGraph& graph, std::size_t v);

struct Suggestion {
  std::size_t vertex = 0;
  Scenario scenario;
  Decision current = Decision::kDeny;
  Decision proposed = Decision::kAllow;
  std::int64_t delta = 0;
};

struct ReviewLogEntry {
  std::size_t vertex = 0;
  Decision proposed = Decision::kDeny;
  bool accepted = false;
  std::int64_t delta = 0;
  std::string timestamp;  // ISO-8601 UTC

  friend bool operator==(const ReviewLogEntry&, const ReviewLogEntry&) = default;
};

enum class SessionStatus { kActive, kExhausted, kClean };

std::string_view to_string(SessionStatus status) noexcept;

// Greedy review loop. Each round proposes the unvisited vertex whose label
// flip removes the most violations (lowest index on ties); the user accepts
// or rejects and the vertex is never proposed again in this session.
//
// Single writer: callers serialize next_suggestion()/respond().
class ReviewSession {
 public:
  static constexpr std::size_t kDefaultCap = 15;

  // Throws InvalidArgument for cap == 0.
  ReviewSession(std::string target, NNGraph graph, std::size_t cap = kDefaultCap);

  // Rebuilds a saved session. Throws InvalidArgument for out-of-range vertices.
  static ReviewSession restore(std::string target, NNGraph graph, std::size_t cap,
                               std::vector<std::size_t> visited,
                               std::vector<ReviewLogEntry> log);

  // Returns the pending suggestion, computing one if needed. Returns nullopt
  // (and closes the session) when there are no violations, the cap is
  // reached, or every vertex has been visited. Throws SessionClosed when
  // called on a closed session.
  std::optional<Suggestion> next_suggestion();

  // Throws StaleSuggestion unless `vertex` is the pending suggestion.
  void respond(std::size_t vertex, bool accept);

  const std::string& target() const noexcept { return target_; }
  const NNGraph& graph() const noexcept { return graph_; }
  SessionStatus status() const noexcept { return status_; }
  std::size_t cap() const noexcept { return cap_; }
  const std::vector<std::size_t>& visited() const noexcept { return visited_order_; }
  bool is_visited(std::size_t v) const { return visited_.at(v); }
  const std::vector<ReviewLogEntry>& log() const noexcept { return log_; }
  const std::optional<Suggestion>& pending() const noexcept { return pending_; }

  std::size_t remaining_violations() const { return violation_count(graph_); }
  std::size_t accepted_count() const noexcept;
  std::size_t rejected_count() const noexcept { return log_.size() - accepted_count(); }

 private:
  std::string target_;
  NNGraph graph_;
  std::size_t cap_;
  std::vector<bool> visited_;
  std::vector<std::size_t> visited_order_;
  std::vector<ReviewLogEntry> log_;
  std::optional<Suggestion> pending_;
  SessionStatus status_ = SessionStatus::kActive;
};

// "Suggestion: For {Home,Memo}, WorkCloud = DENY. Agree?(y/n)"
std::string format_prompt(const Suggestion& suggestion, std::string_view target);

// Writes the session's current labels into the dataset column for its target.
void apply_session(Dataset& dataset, const ReviewSession& session);

}  // namespace polex
