#include "polex/active_learning.hpp"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <ctime>
#include <utility>

#include "polex/dataset.hpp"
#include "polex/error.hpp"

namespace polex {

NNGraph NNGraph::build(std::span<const LabeledExample> labeled, const WeightTable& weights) {
  if (labeled.size() < 2) {
    throw Error(ErrorCode::kTooFewExamples, "a review needs at least two labeled examples");
  }
  NNGraph g;
  g.scenarios_.reserve(labeled.size());
  g.labels_.reserve(labeled.size());
  g.adjacency_.reserve(labeled.size());
  for (const auto& ex : labeled) {
    g.scenarios_.push_back(ex.scenario);
    g.labels_.push_back(ex.decision);
  }
  for (std::size_t v = 0; v < labeled.size(); ++v) {
    g.adjacency_.push_back(nearest_neighbors(labeled[v].scenario, labeled, weights, v));
  }
  return g;
}

bool NNGraph::same_edges(const NNGraph& other) const {
  if (scenarios_ != other.scenarios_ || adjacency_.size() != other.adjacency_.size()) return false;
  for (std::size_t v = 0; v < adjacency_.size(); ++v) {
    if (adjacency_[v].members != other.adjacency_[v].members ||
        adjacency_[v].similarity != other.adjacency_[v].similarity) {
      return false;
    }
  }
  return true;
}

std::string_view to_string(ViolationKind kind) noexcept {
  return kind == ViolationKind::kNoMajority ? "no-majority" : "disagrees-with-majority";
}

namespace {

std::optional<ViolationKind> check_vertex(const NNGraph& g, std::span<const Decision> labels,
                                          std::size_t v) {
  Vote vote;
  for (std::size_t u : g.neighbors(v).members) {
    if (labels[u] == Decision::kAllow) {
      ++vote.allow;
    } else {
      ++vote.deny;
    }
  }
  const auto majority = strict_majority(vote);
  if (!majority) return ViolationKind::kNoMajority;
  if (*majority != labels[v]) return ViolationKind::kDisagreesWithMajority;
  return std::nullopt;
}

std::size_t count_with(const NNGraph& g, std::span<const Decision> labels) {
  std::size_t n = 0;
  for (std::size_t v = 0; v < g.size(); ++v) {
    if (check_vertex(g, labels, v)) ++n;
  }
  return n;
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace

std::vector<Violation> violations(const NNGraph& graph) {
  std::vector<Violation> out;
  for (std::size_t v = 0; v < graph.size(); ++v) {
    if (auto kind = check_vertex(graph, graph.labels(), v)) out.push_back({v, *kind});
  }
  return out;
}

std::size_t violation_count(const NNGraph& graph) { return count_with(graph, graph.labels()); }

std::int64_t flip_gain(const NNGraph& graph, std::size_t v) {
  std::vector<Decision> labels(graph.labels().begin(), graph.labels().end());
  const auto before = static_cast<std::int64_t>(count_with(graph, labels));
  labels.at(v) = flip(labels[v]);
  return before - static_cast<std::int64_t>(count_with(graph, labels));
}

std::string_view to_string(SessionStatus status) noexcept {
  switch (status) {
    case SessionStatus::kActive: return "active";
    case SessionStatus::kExhausted: return "exhausted";
    case SessionStatus::kClean: return "clean";
  }
  return "unknown";
}

ReviewSession::ReviewSession(std::string target, NNGraph graph, std::size_t cap)
    : target_(std::move(target)), graph_(std::move(graph)), cap_(cap), visited_(graph_.size()) {
  if (cap_ == 0) throw Error(ErrorCode::kInvalidArgument, "suggestion cap must be at least 1");
}

ReviewSession ReviewSession::restore(std::string target, NNGraph graph, std::size_t cap,
                                     std::vector<std::size_t> visited,
                                     std::vector<ReviewLogEntry> log) {
  ReviewSession s(std::move(target), std::move(graph), cap);
  for (std::size_t v : visited) {
    if (v >= s.graph_.size() || s.visited_[v]) {
      throw Error(ErrorCode::kInvalidArgument, "visited vertex " + std::to_string(v) + " invalid");
    }
    s.visited_[v] = true;
    s.visited_order_.push_back(v);
  }
  for (const auto& entry : log) {
    if (entry.vertex >= s.graph_.size()) {
      throw Error(ErrorCode::kInvalidArgument, "log vertex " + std::to_string(entry.vertex));
    }
  }
  s.log_ = std::move(log);
  return s;
}

std::optional<Suggestion> ReviewSession::next_suggestion() {
  if (pending_) return pending_;
  if (status_ != SessionStatus::kActive) {
    throw Error(ErrorCode::kSessionClosed, std::string(to_string(status_)));
  }
  if (violation_count(graph_) == 0) {
    status_ = SessionStatus::kClean;
    return std::nullopt;
  }
  if (log_.size() >= cap_ || visited_order_.size() >= graph_.size()) {
    status_ = SessionStatus::kExhausted;
    return std::nullopt;
  }

  std::optional<std::size_t> best;
  std::int64_t best_delta = 0;
  for (std::size_t v = 0; v < graph_.size(); ++v) {
    if (visited_[v]) continue;
    const std::int64_t delta = flip_gain(graph_, v);
    if (!best || delta > best_delta) {
      best = v;
      best_delta = delta;
    }
  }
  pending_ = Suggestion{*best, graph_.scenario(*best), graph_.label(*best),
                        flip(graph_.label(*best)), best_delta};
  return pending_;
}

void ReviewSession::respond(std::size_t vertex, bool accept) {
  if (!pending_ || pending_->vertex != vertex) {
    throw Error(ErrorCode::kStaleSuggestion,
                "vertex " + std::to_string(vertex) + " is not the pending suggestion");
  }
  const Suggestion s = *std::exchange(pending_, std::nullopt);
  visited_[vertex] = true;
  visited_order_.push_back(vertex);
  if (accept) graph_.set_label(vertex, s.proposed);
  log_.push_back(ReviewLogEntry{vertex, s.proposed, accept, s.delta, utc_timestamp()});
}

std::size_t ReviewSession::accepted_count() const noexcept {
  return static_cast<std::size_t>(
      std::count_if(log_.begin(), log_.end(), [](const ReviewLogEntry& e) { return e.accepted; }));
}

std::string format_prompt(const Suggestion& suggestion, std::string_view target) {
  std::string decision(to_string(suggestion.proposed));
  for (auto& c : decision) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return "Suggestion: For {" + format_scenario(suggestion.scenario, ",") + "}, " +
         std::string(target) + " = " + decision + ". Agree?(y/n)";
}

void apply_session(Dataset& dataset, const ReviewSession& session) {
  const std::size_t t = dataset.target_index(session.target());
  const auto& graph = session.graph();
  if (graph.size() != dataset.row_count()) {
    throw Error(ErrorCode::kInvalidArgument, "session does not match dataset row count");
  }
  for (std::size_t v = 0; v < graph.size(); ++v) {
    if (!(dataset.rows()[v].scenario == graph.scenario(v))) {
      throw Error(ErrorCode::kInvalidArgument, "session does not match dataset rows",
                  "rows[" + std::to_string(v) + "]");
    }
    dataset.set_decision(v, t, graph.label(v));
  }
}

}  // namespace polex
