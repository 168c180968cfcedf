#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>

#include "polex/dataset.hpp"

namespace polex {

struct ApiResponse {
  int status = 200;
  std::string body;  // JSON
};

// JSON API over one loaded dataset. Transport-independent: the HTTP server
// forwards every /api request to handle().
//
//   GET  /api/dataset                      tags, targets, row count
//   POST /api/targets/{t}/predict          {"scenario": [tags]} -> prediction
//   GET  /api/targets/{t}/weights          resolved weight table
//   PUT  /api/targets/{t}/order            {"order": [[lesser, greater]], "groups"?: [...]}
//   POST /api/targets/{t}/sessions         open a review session (?cap=N)
//   GET  /api/sessions/{id}                session state
//   POST /api/sessions/{id}/respond        {"vertex": v, "accept": bool} (?autosave=1)
//   POST /api/sessions/{id}/close          persist accepted flips, drop the session
//
// Reads use an immutable dataset snapshot; mutations are serialized and swap
// in a new snapshot. Changing a target's order invalidates its open sessions.
// There is no authentication.
class ApiService {
 public:
  explicit ApiService(Dataset dataset, std::optional<std::filesystem::path> dataset_path = {});
  ~ApiService();
  ApiService(const ApiService&) = delete;
  ApiService& operator=(const ApiService&) = delete;

  ApiResponse handle(std::string_view method, std::string_view path, std::string_view body,
                     const std::multimap<std::string, std::string>& query = {});

  std::shared_ptr<const Dataset> snapshot() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

// cpp-httplib front end for ApiService; optionally serves static assets
// (the web console) from `static_dir` at "/".
class HttpServer {
 public:
  explicit HttpServer(ApiService& api, std::optional<std::filesystem::path> static_dir = {});
  ~HttpServer();
  HttpServer(const HttpServer&) = delete;
  HttpServer& operator=(const HttpServer&) = delete;

  // Returns the bound port (pass 0 for an ephemeral port), or -1 on failure.
  int bind(const std::string& host, int port);
  // Blocks until stop().
  bool listen();
  void stop();
  void wait_until_ready() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace polex
