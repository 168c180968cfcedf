#include "polex/error.hpp"
#include "polex/persistence.hpp"
#include "polex/weights.hpp"

namespace polex {

using nlohmann::json;

// {"cap": 15, "dataset_fingerprint": "<sha256>", "log": [...], "pending": <vertex>|null,
//  "status": "active", "target": "...", "version": 1, "visited": [...]}
json session_to_json(const ReviewSession& session, const Dataset& dataset) {
  json log = json::array();
  for (const auto& e : session.log()) {
    log.push_back({{"accepted", e.accepted},
                   {"delta", e.delta},
                   {"proposed", to_int(e.proposed)},
                   {"scenario", session.graph().scenario(e.vertex).names()},
                   {"timestamp", e.timestamp},
                   {"vertex", e.vertex}});
  }
  json pending = nullptr;
  if (session.pending()) pending = session.pending()->vertex;
  return {{"cap", session.cap()},
          {"dataset_fingerprint", fingerprint(dataset)},
          {"log", std::move(log)},
          {"pending", std::move(pending)},
          {"status", std::string(to_string(session.status()))},
          {"target", session.target()},
          {"version", kDocumentVersion},
          {"visited", session.visited()}};
}

void save_session(const ReviewSession& session, const Dataset& dataset,
                  const std::filesystem::path& path) {
  write_file_atomic(path, dump_canonical(session_to_json(session, dataset)));
}

ReviewSession session_from_json(const json& doc, const Dataset& dataset) {
  try {
    if (!doc.is_object() || doc.value("version", 0) != kDocumentVersion) {
      throw Error(ErrorCode::kValidationError, "unsupported session document", "version");
    }
    const std::string expected = doc.at("dataset_fingerprint").get<std::string>();
    if (expected != fingerprint(dataset)) {
      throw Error(ErrorCode::kFingerprintMismatch,
                  "dataset changed since the session was saved (expected " + expected + ")");
    }
    const std::string target = doc.at("target").get<std::string>();
    const auto labeled = per_target_view(dataset, target);
    NNGraph graph = NNGraph::build(labeled, resolve_table(dataset, target));

    std::vector<ReviewLogEntry> log;
    for (const auto& e : doc.at("log")) {
      log.push_back(ReviewLogEntry{e.at("vertex").get<std::size_t>(),
                                   decision_from_int(e.at("proposed").get<long long>()),
                                   e.at("accepted").get<bool>(), e.at("delta").get<std::int64_t>(),
                                   e.at("timestamp").get<std::string>()});
    }
    ReviewSession session = ReviewSession::restore(
        target, std::move(graph), doc.at("cap").get<std::size_t>(),
        doc.at("visited").get<std::vector<std::size_t>>(), std::move(log));
    // Closed sessions close again deterministically; active ones recompute
    // the same pending suggestion.
    const std::string status = doc.value("status", std::string("active"));
    if (status != "active" || !doc.value("pending", json()).is_null()) session.next_suggestion();
    return session;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kValidationError, e.what(), "session");
  }
}

ReviewSession resume_session(const std::filesystem::path& path, const Dataset& dataset) {
  return session_from_json(read_json_file(path), dataset);
}

}  // namespace polex
