#include "polex/service.hpp"

#include <httplib.h>

#include <atomic>
#include <cstdio>
#include <mutex>
#include <random>
#include <unordered_map>

#include "polex/active_learning.hpp"
#include "polex/error.hpp"
#include "polex/persistence.hpp"
#include "polex/predictor.hpp"
#include "polex/weights.hpp"

namespace polex {

using nlohmann::json;

namespace {

struct HttpError {
  int status;
  json body;
};

[[noreturn]] void fail(int status, std::string_view code, const std::string& message) {
  throw HttpError{status, {{"error", std::string(code)}, {"message", message}}};
}

int status_for(const Error& e) {
  switch (e.code()) {
    case ErrorCode::kEmptyScenario: return 422;
    case ErrorCode::kStaleSuggestion:
    case ErrorCode::kSessionClosed: return 409;
    case ErrorCode::kIoError: return 500;
    default: return 400;
  }
}

std::vector<std::string_view> split_path(std::string_view path) {
  std::vector<std::string_view> parts;
  while (!path.empty()) {
    if (path.front() == '/') {
      path.remove_prefix(1);
      continue;
    }
    auto end = path.find('/');
    parts.push_back(path.substr(0, end));
    if (end == std::string_view::npos) break;
    path.remove_prefix(end);
  }
  return parts;
}

json parse_body(std::string_view body) {
  if (body.empty()) return json::object();
  try {
    return json::parse(body);
  } catch (const json::parse_error& e) {
    fail(400, "ParseError", e.what());
  }
}

std::string new_session_id() {
  static thread_local std::random_device rd;
  char buf[33];
  std::snprintf(buf, sizeof buf, "%08x%08x%08x%08x", rd(), rd(), rd(), rd());
  return buf;
}

bool flag_set(const std::multimap<std::string, std::string>& query, const std::string& key) {
  auto it = query.find(key);
  return it != query.end() && (it->second == "1" || it->second == "true");
}

}  // namespace

struct ApiService::Impl {
  struct Session {
    std::string id;
    std::size_t target = 0;
    std::optional<ReviewSession> review;
    bool invalidated = false;
    std::mutex mutex;
  };

  std::optional<std::filesystem::path> dataset_path;

  mutable std::mutex snapshot_mutex;
  std::shared_ptr<const Dataset> current;

  // Serializes every mutation of the dataset snapshot.
  std::mutex writer_mutex;

  std::mutex sessions_mutex;
  std::unordered_map<std::string, std::shared_ptr<Session>> sessions;

  std::shared_ptr<const Dataset> snapshot() const {
    std::lock_guard lock(snapshot_mutex);
    return current;
  }
  void publish(std::shared_ptr<const Dataset> next) {
    std::lock_guard lock(snapshot_mutex);
    current = std::move(next);
  }

  std::size_t target_of(const Dataset& d, std::string_view name) const {
    auto t = d.find_target(name);
    if (!t) fail(400, "UnknownTarget", std::string(name));
    return *t;
  }

  std::shared_ptr<Session> find_session(std::string_view id) {
    std::lock_guard lock(sessions_mutex);
    auto it = sessions.find(std::string(id));
    if (it == sessions.end()) fail(404, "UnknownSession", std::string(id));
    return it->second;
  }

  json suggestion_json(const Session& s, const Dataset& d) const {
    const auto& pending = s.review->pending();
    if (!pending) return nullptr;
    const std::string& target = d.targets()[s.target].name;
    return {{"current", std::string(to_string(pending->current))},
            {"delta", pending->delta},
            {"prompt", format_prompt(*pending, target)},
            {"proposed", std::string(to_string(pending->proposed))},
            {"scenario", pending->scenario.names()},
            {"vertex", pending->vertex}};
  }

  json session_state(const Session& s, const Dataset& d) const {
    const ReviewSession& r = *s.review;
    return {{"counters",
             {{"accepted", r.accepted_count()},
              {"issued", r.log().size() + (r.pending() ? 1 : 0)},
              {"rejected", r.rejected_count()},
              {"remaining", r.remaining_violations()}}},
            {"id", s.id},
            {"status", s.invalidated ? std::string("invalidated") : std::string(to_string(r.status()))},
            {"suggestion", suggestion_json(s, d)},
            {"target", d.targets()[s.target].name}};
  }

  void persist(const Dataset& d) {
    if (dataset_path) save_dataset(d, *dataset_path);
  }

  // ---- handlers ----

  json get_dataset() const {
    const auto d = snapshot();
    json tags = json::array();
    for (const auto& t : d->universe().tags()) tags.push_back(t.name);
    json targets = json::array();
    for (const auto& t : d->targets()) targets.push_back(t.name);
    return {{"rows", d->row_count()}, {"tags", std::move(tags)}, {"targets", std::move(targets)}};
  }

  json predict(std::string_view target, const json& body) const {
    const auto d = snapshot();
    const std::size_t t = target_of(*d, target);
    auto it = body.find("scenario");
    if (it == body.end() || !it->is_array()) fail(400, "InvalidArgument", "body needs a 'scenario' array");
    std::vector<std::string> names;
    for (const auto& n : *it) {
      if (!n.is_string()) fail(400, "InvalidArgument", "scenario entries must be tag names");
      names.push_back(n.get<std::string>());
    }
    const Scenario query = make_scenario(d->universe(), names);
    const auto labeled = per_target_view(*d, t);
    if (labeled.empty()) fail(400, "EmptyLabeledSet", d->targets()[t].name);
    const Prediction p = polex::predict(query, labeled, resolve_table(*d, d->targets()[t].name));
    json out = prediction_to_json(query, p, labeled);
    out["target"] = d->targets()[t].name;
    return out;
  }

  json weights(std::string_view target) const {
    const auto d = snapshot();
    const std::size_t t = target_of(*d, target);
    const char* source = d->target_weights(t) ? "target" : d->global_weights() ? "global" : "default";
    return {{"source", source},
            {"target", d->targets()[t].name},
            {"weights", weight_table_to_json(resolve_table(*d, d->targets()[t].name), d->universe())}};
  }

  json put_order(std::string_view target, const json& body) {
    std::unique_lock writer(writer_mutex);
    const auto d = snapshot();
    const std::size_t t = target_of(*d, target);
    const std::string& name = d->targets()[t].name;

    json doc = {{"order", body.value("order", json::array())}};
    if (body.contains("groups")) {
      doc["groups"] = body["groups"];
    } else {
      const WeightConfig* base = d->target_weights(t);
      if (!base && d->global_weights()) base = &*d->global_weights();
      json groups = json::array();
      if (base) {
        for (const auto& g : base->groups) {
          json tags = json::array();
          for (TagId id : g.members) tags.push_back(d->universe().name(id));
          groups.push_back({{"name", g.name}, {"tags", std::move(tags)}});
        }
      }
      doc["groups"] = std::move(groups);
    }

    // Reuse the document validator so API and file configs obey the same rules.
    json ds = dataset_to_json(*d);
    ds["weights"]["targets"][name] = doc;
    Dataset next = [&] {
      try {
        return dataset_from_json(ds);
      } catch (const Error& e) {
        if (!e.path().empty()) {
          throw HttpError{400, {{"cycle", e.path()}, {"error", "CyclicOrder"}, {"message", e.detail()}}};
        }
        throw;
      }
    }();
    auto published = std::make_shared<const Dataset>(std::move(next));
    publish(published);
    persist(*published);
    writer.unlock();
    // Session locks are always taken before the writer lock, never after.
    invalidate_sessions(t);
    return weights(name);
  }

  void invalidate_sessions(std::size_t target) {
    std::lock_guard lock(sessions_mutex);
    for (auto& [id, s] : sessions) {
      if (s->target != target) continue;
      std::lock_guard session_lock(s->mutex);
      s->invalidated = true;
    }
  }

  json open_session(std::string_view target, const std::multimap<std::string, std::string>& query) {
    const auto d = snapshot();
    const std::size_t t = target_of(*d, target);
    std::size_t cap = ReviewSession::kDefaultCap;
    if (auto it = query.find("cap"); it != query.end()) {
      try {
        cap = std::stoul(it->second);
      } catch (const std::exception&) {
        fail(400, "InvalidArgument", "cap must be a positive integer");
      }
    }
    const std::string& name = d->targets()[t].name;
    auto session = std::make_shared<Session>();
    session->target = t;
    session->review.emplace(name, NNGraph::build(per_target_view(*d, t), resolve_table(*d, name)), cap);
    session->review->next_suggestion();
    {
      std::lock_guard lock(sessions_mutex);
      do {
        session->id = new_session_id();
      } while (sessions.count(session->id) != 0);
      sessions.emplace(session->id, session);
    }
    std::lock_guard session_lock(session->mutex);
    return session_state(*session, *d);
  }

  json get_session(std::string_view id) {
    auto s = find_session(id);
    std::lock_guard lock(s->mutex);
    return session_state(*s, *snapshot());
  }

  json respond(std::string_view id, const json& body,
               const std::multimap<std::string, std::string>& query) {
    auto s = find_session(id);
    std::lock_guard lock(s->mutex);
    if (s->invalidated) fail(409, "SessionInvalidated", "weights changed; open a new session");
    auto vertex = body.find("vertex");
    auto accept = body.find("accept");
    if (vertex == body.end() || !vertex->is_number_unsigned() || accept == body.end() ||
        !accept->is_boolean()) {
      fail(400, "InvalidArgument", "body needs 'vertex' (index) and 'accept' (bool)");
    }
    s->review->respond(vertex->get<std::size_t>(), accept->get<bool>());
    if (accept->get<bool>()) {
      std::lock_guard writer(writer_mutex);
      auto next = std::make_shared<Dataset>(*snapshot());
      next->set_decision(vertex->get<std::size_t>(), s->target, s->review->graph().label(vertex->get<std::size_t>()));
      publish(next);
      if (flag_set(query, "autosave")) persist(*next);
    }
    if (s->review->status() == SessionStatus::kActive) s->review->next_suggestion();
    return session_state(*s, *snapshot());
  }

  json close_session(std::string_view id) {
    auto s = find_session(id);
    json state;
    {
      std::lock_guard lock(s->mutex);
      state = session_state(*s, *snapshot());
      if (s->review->accepted_count() > 0) {
        std::lock_guard writer(writer_mutex);
        persist(*snapshot());
      }
    }
    std::lock_guard lock(sessions_mutex);
    sessions.erase(std::string(id));
    state["closed"] = true;
    return state;
  }

  json route(std::string_view method, std::string_view path, std::string_view body,
             const std::multimap<std::string, std::string>& query) {
    const auto parts = split_path(path);
    if (parts.size() < 2 || parts[0] != "api") fail(404, "NotFound", std::string(path));

    if (parts.size() == 2 && parts[1] == "dataset" && method == "GET") return get_dataset();

    if (parts[1] == "targets" && parts.size() == 4) {
      const std::string_view target = parts[2];
      const std::string_view action = parts[3];
      if (action == "predict" && method == "POST") return predict(target, parse_body(body));
      if (action == "weights" && method == "GET") return weights(target);
      if (action == "order" && method == "PUT") return put_order(target, parse_body(body));
      if (action == "sessions" && method == "POST") return open_session(target, query);
    }
    if (parts[1] == "sessions" && parts.size() >= 3) {
      const std::string_view id = parts[2];
      if (parts.size() == 3 && method == "GET") return get_session(id);
      if (parts.size() == 4 && parts[3] == "respond" && method == "POST") {
        return respond(id, parse_body(body), query);
      }
      if (parts.size() == 4 && parts[3] == "close" && method == "POST") return close_session(id);
    }
    fail(404, "NotFound", std::string(method) + " " + std::string(path));
  }
};

ApiService::ApiService(Dataset dataset, std::optional<std::filesystem::path> dataset_path)
    : impl_(std::make_unique<Impl>()) {
  impl_->dataset_path = std::move(dataset_path);
  impl_->current = std::make_shared<const Dataset>(std::move(dataset));
}

ApiService::~ApiService() = default;

std::shared_ptr<const Dataset> ApiService::snapshot() const { return impl_->snapshot(); }

ApiResponse ApiService::handle(std::string_view method, std::string_view path, std::string_view body,
                               const std::multimap<std::string, std::string>& query) {
  try {
    return {200, impl_->route(method, path, body, query).dump()};
  } catch (const HttpError& e) {
    return {e.status, e.body.dump()};
  } catch (const Error& e) {
    json out = {{"error", std::string(to_string(e.code()))}, {"message", e.detail()}};
    if (!e.locator().empty()) out["locator"] = e.locator();
    return {status_for(e), out.dump()};
  } catch (const std::exception& e) {
    return {500, json{{"error", "Internal"}, {"message", e.what()}}.dump()};
  }
}

struct HttpServer::Impl {
  ApiService& api;
  httplib::Server server;

  explicit Impl(ApiService& a) : api(a) {}

  void forward(const char* method, const httplib::Request& req, httplib::Response& res) {
    std::multimap<std::string, std::string> query(req.params.begin(), req.params.end());
    ApiResponse out = api.handle(method, req.path, req.body, query);
    res.status = out.status;
    res.set_content(out.body, "application/json");
  }
};

HttpServer::HttpServer(ApiService& api, std::optional<std::filesystem::path> static_dir)
    : impl_(std::make_unique<Impl>(api)) {
  auto& s = impl_->server;
  const std::string pattern = R"(/api/.*)";
  s.Get(pattern, [this](const httplib::Request& req, httplib::Response& res) { impl_->forward("GET", req, res); });
  s.Post(pattern, [this](const httplib::Request& req, httplib::Response& res) { impl_->forward("POST", req, res); });
  s.Put(pattern, [this](const httplib::Request& req, httplib::Response& res) { impl_->forward("PUT", req, res); });
  if (static_dir) s.set_mount_point("/", static_dir->string());
}

HttpServer::~HttpServer() { stop(); }

int HttpServer::bind(const std::string& host, int port) {
  if (port == 0) return impl_->server.bind_to_any_port(host);
  return impl_->server.bind_to_port(host, port) ? port : -1;
}

bool HttpServer::listen() { return impl_->server.listen_after_bind(); }

void HttpServer::stop() { impl_->server.stop(); }

void HttpServer::wait_until_ready() const { impl_->server.wait_until_ready(); }

}  // namespace polex
