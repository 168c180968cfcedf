// polex: learn allow/deny policies from labeled scenarios.
//
//   polex predict   --dataset D --target T Home+Photo [--json]
//   polex review    --dataset D --target T [--cap N] [--session F] [--resume] [--out F]
//   polex eval      --dataset D (--tests F | --generate --persona P) [--seed S] [--report F] [--json]
//   polex gen-tests --dataset D [--seed S] [--count N] [--max-tags K] [--persona P] [--out F]
//   polex weights   --dataset D [--target T] [--json]
//   polex import-csv --csv F --out D
//   polex serve     --dataset D [--bind HOST:PORT] [--static DIR]
//
// Exit codes: 0 success, 2 invalid input, 1 internal failure.

#include <CLI11.hpp>

#include <unistd.h>

#include <csignal>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <thread>

#include "polex/active_learning.hpp"
#include "polex/dataset.hpp"
#include "polex/error.hpp"
#include "polex/evaluation.hpp"
#include "polex/persistence.hpp"
#include "polex/predictor.hpp"
#include "polex/service.hpp"
#include "polex/weights.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInternal = 1;
constexpr int kExitInvalid = 2;

struct GlobalOptions {
  std::string dataset;
  std::string target;
  std::uint64_t seed = 0;
  bool json = false;
};

polex::Dataset load(const GlobalOptions& g) {
  if (g.dataset.empty()) throw polex::Error(polex::ErrorCode::kInvalidArgument, "--dataset is required");
  std::vector<std::string> warnings;
  polex::Dataset d = polex::load_dataset(g.dataset, &warnings);
  for (const auto& w : warnings) std::cerr << "warning: " << w << '\n';
  return d;
}

const std::string& require_target(const GlobalOptions& g, const polex::Dataset& d) {
  if (g.target.empty()) {
    if (d.targets().size() == 1) return d.targets().front().name;
    throw polex::Error(polex::ErrorCode::kInvalidArgument, "--target is required");
  }
  return d.targets()[d.target_index(g.target)].name;
}

std::string upper(std::string_view s) {
  std::string out(s);
  for (auto& c : out) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return out;
}

void emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty() || out_path == "-") {
    std::cout << text;
  } else {
    polex::write_file_atomic(out_path, text);
  }
}

// ---- predict ----------------------------------------------------------------

int run_predict(const GlobalOptions& g, const std::string& scenario_text) {
  const polex::Dataset d = load(g);
  const std::string& target = require_target(g, d);
  const polex::Scenario query = polex::parse_scenario(d.universe(), scenario_text);
  const auto labeled = polex::per_target_view(d, target);
  const polex::Prediction p = polex::predict(query, labeled, polex::resolve_table(d, target));

  if (g.json) {
    json out = polex::prediction_to_json(query, p, labeled);
    out["target"] = target;
    std::cout << polex::dump_canonical(out);
    return kExitOk;
  }
  std::string nearest;
  for (std::size_t i : p.neighbors.members) {
    if (!nearest.empty()) nearest += ", ";
    nearest += polex::format_scenario(labeled[i].scenario);
  }
  std::cout << upper(polex::to_string(p.decision)) << " (" << polex::to_string(p.provenance);
  if (p.removed) std::cout << ", removed " << polex::format_scenario(labeled[*p.removed].scenario);
  std::cout << "; nearest: " << nearest << " @ " << p.neighbors.similarity.to_string() << ")\n";
  std::cout << "  vote: allow " << p.vote.allow << ", deny " << p.vote.deny << '\n';
  for (std::size_t i : p.neighbors.members) {
    std::cout << "  " << polex::scenario_label(labeled[i].scenario) << " -> "
              << polex::to_string(labeled[i].decision) << '\n';
  }
  return kExitOk;
}

// ---- review -----------------------------------------------------------------

struct ReviewOptions {
  std::size_t cap = polex::ReviewSession::kDefaultCap;
  std::string session_path;
  std::string out_path;
  bool resume = false;
};

int run_review(const GlobalOptions& g, const ReviewOptions& opt) {
  polex::Dataset d = load(g);
  const std::string target = require_target(g, d);
  const fs::path dataset_path(g.dataset);
  fs::path out = opt.out_path.empty() ? dataset_path : fs::path(opt.out_path);
  if (opt.out_path.empty() && dataset_path.extension() != ".json") out.replace_extension(".json");
  fs::path session_path = opt.session_path.empty() ? fs::path(out.string() + ".session.json")
                                                    : fs::path(opt.session_path);

  std::optional<polex::ReviewSession> session;
  if (opt.resume) {
    session.emplace(polex::resume_session(session_path, d));
    if (session->target() != target) {
      throw polex::Error(polex::ErrorCode::kInvalidArgument,
                         "session was saved for target '" + session->target() + "'");
    }
  } else {
    session.emplace(target,
                    polex::NNGraph::build(polex::per_target_view(d, target), polex::resolve_table(d, target)),
                    opt.cap);
  }

  const std::size_t initial = session->remaining_violations();
  std::cout << "Reviewing " << target << ": " << d.row_count() << " examples, " << initial
            << " invariant violations\n";

  const std::size_t accepted_before = session->accepted_count();
  const bool interactive = ::isatty(STDIN_FILENO) != 0;
  bool quit = false;
  while (!quit && session->status() == polex::SessionStatus::kActive) {
    auto s = session->next_suggestion();
    if (!s) break;
    for (;;) {
      std::cout << polex::format_prompt(*s, target) << ' ' << std::flush;
      std::string line;
      if (!std::getline(std::cin, line)) {
        quit = true;
        std::cout << '\n';
        break;
      }
      if (!interactive) std::cout << line << '\n';
      if (line == "y" || line == "Y" || line == "yes") {
        session->respond(s->vertex, true);
        break;
      }
      if (line == "n" || line == "N" || line == "no") {
        session->respond(s->vertex, false);
        break;
      }
      if (line == "q" || line == "quit") {
        quit = true;
        break;
      }
      std::cout << "Please answer y or n (q to stop).\n";
    }
  }

  const std::size_t accepted_now = session->accepted_count() - accepted_before;
  if (accepted_now > 0) {
    polex::apply_session(d, *session);
    polex::save_dataset(d, out);
    std::cout << "Updated dataset written to " << out.string() << '\n';
  }
  polex::save_session(*session, d, session_path);

  std::cout << "Review " << polex::to_string(session->status()) << ": " << session->log().size()
            << " suggestions, " << session->accepted_count() << " accepted (errors found), "
            << session->rejected_count() << " rejected, " << session->remaining_violations()
            << " violations remaining\n";
  std::cout << "Session log: " << session_path.string() << '\n';
  return kExitOk;
}

// ---- eval / gen-tests -------------------------------------------------------

struct TestGenOptions {
  std::optional<std::size_t> count;
  std::size_t max_tags = 3;
  std::string persona_path;
  std::string out_path;
};

polex::TestScenarioSpec make_spec(const polex::Dataset& d, const GlobalOptions& g, const TestGenOptions& t) {
  polex::TestScenarioSpec spec = polex::default_test_spec(d, g.seed);
  if (t.count) spec.count = *t.count;
  spec.max_tags = t.max_tags;
  return spec;
}

int run_gen_tests(const GlobalOptions& g, const TestGenOptions& t) {
  const polex::Dataset d = load(g);
  const auto spec = make_spec(d, g, t);
  json doc;
  if (!t.persona_path.empty()) {
    const auto persona = polex::persona_from_json(polex::read_json_file(t.persona_path), d.universe());
    doc = polex::tests_to_json(polex::generate_labeled_tests(spec, d, persona));
  } else {
    doc = polex::tests_to_json(polex::generate_tests(spec, d));
  }
  emit(polex::dump_canonical(doc), t.out_path);
  return kExitOk;
}

struct EvalOptions {
  std::string tests_path;
  bool generate = false;
  std::string report_path;
  std::string text_path;
};

int run_eval(const GlobalOptions& g, const EvalOptions& e, const TestGenOptions& t) {
  const polex::Dataset d = load(g);
  std::vector<polex::TestCase> tests;
  if (e.generate) {
    if (t.persona_path.empty()) {
      throw polex::Error(polex::ErrorCode::kMissingGroundTruth,
                         "--generate needs --persona to label the generated scenarios");
    }
    const auto persona = polex::persona_from_json(polex::read_json_file(t.persona_path), d.universe());
    tests = polex::generate_labeled_tests(make_spec(d, g, t), d, persona);
  } else if (!e.tests_path.empty()) {
    tests = polex::tests_from_json(polex::read_json_file(e.tests_path), d);
  } else {
    throw polex::Error(polex::ErrorCode::kInvalidArgument, "pass --tests FILE or --generate");
  }

  const polex::EvalReport report = polex::run_eval(d, tests, g.seed);
  const std::string json_text = polex::dump_canonical(polex::report_to_json(report));
  const std::string text = polex::report_to_text(report);
  if (!e.report_path.empty()) polex::write_file_atomic(e.report_path, json_text);
  if (!e.text_path.empty()) polex::write_file_atomic(e.text_path, text);
  std::cout << (g.json ? json_text : text);
  return kExitOk;
}

// ---- weights / import / serve -----------------------------------------------

int run_weights(const GlobalOptions& g) {
  const polex::Dataset d = load(g);
  std::vector<std::string> targets;
  if (g.target.empty()) {
    for (const auto& t : d.targets()) targets.push_back(t.name);
  } else {
    targets.push_back(require_target(g, d));
  }
  json doc = json::object();
  for (const auto& name : targets) {
    const polex::WeightTable table = polex::resolve_table(d, name);
    if (g.json) {
      doc[name] = polex::weight_table_to_json(table, d.universe());
      continue;
    }
    std::cout << name << '\n';
    std::size_t width = 3;
    for (const auto& tag : d.universe().tags()) width = std::max(width, tag.name.size());
    std::cout << "  " << "tag" << std::string(width - 3 + 2, ' ') << "w0  w1\n";
    for (const auto& tag : d.universe().tags()) {
      const auto p = table.at(tag.id);
      std::cout << "  " << tag.name << std::string(width - tag.name.size() + 2, ' ') << p.w0 << "   "
                << p.w1 << '\n';
    }
  }
  if (g.json) std::cout << polex::dump_canonical(doc);
  return kExitOk;
}

int run_import_csv(const std::string& csv_path, const std::string& out_path) {
  std::vector<std::string> warnings;
  const polex::Dataset d = polex::import_csv(polex::read_file(csv_path), &warnings);
  for (const auto& w : warnings) std::cerr << "warning: " << w << '\n';
  emit(polex::serialize_dataset(d), out_path);
  return kExitOk;
}

int run_serve(const GlobalOptions& g, const std::string& bind, const std::string& static_dir) {
  polex::Dataset d = load(g);
  const auto colon = bind.rfind(':');
  if (colon == std::string::npos) {
    throw polex::Error(polex::ErrorCode::kInvalidArgument, "--bind expects HOST:PORT");
  }
  const std::string host = bind.substr(0, colon);
  int port = 0;
  try {
    port = std::stoi(bind.substr(colon + 1));
  } catch (const std::exception&) {
    throw polex::Error(polex::ErrorCode::kInvalidArgument, "invalid port in --bind");
  }
  fs::path path(g.dataset);
  std::optional<fs::path> save_to;
  if (path.extension() == ".json") save_to = path;
  polex::ApiService api(std::move(d), save_to);
  polex::HttpServer server(api, static_dir.empty() ? std::nullopt : std::optional<fs::path>(static_dir));
  const int bound = server.bind(host, port);
  if (bound < 0) {
    std::cerr << "error: cannot bind " << bind << '\n';
    return kExitInternal;
  }
  // Signals are taken synchronously by a watcher thread; the server threads
  // inherit the blocked mask.
  sigset_t stop_signals;
  sigemptyset(&stop_signals);
  sigaddset(&stop_signals, SIGINT);
  sigaddset(&stop_signals, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &stop_signals, nullptr);
  std::thread watcher([&] {
    int sig = 0;
    sigwait(&stop_signals, &sig);
    server.stop();
  });
  std::cout << "Serving " << g.dataset << " on http://" << host << ':' << bound
            << " (no authentication)\n" << std::flush;
  server.listen();
  // listen() also returns on a socket failure; wake the watcher so it can exit.
  pthread_kill(watcher.native_handle(), SIGTERM);
  watcher.join();
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Learn allow/deny policies from labeled example scenarios"};
  app.require_subcommand(1);
  app.fallthrough();

  GlobalOptions g;
  app.add_option("--dataset,-d", g.dataset, "Dataset document (.json) or spreadsheet export (.csv)");
  app.add_option("--target,-t", g.target, "Policy target");
  app.add_option("--seed", g.seed, "Seed for every random choice");
  app.add_flag("--json", g.json, "Machine-readable output");

  std::string scenario_text;
  auto* predict = app.add_subcommand("predict", "Predict a decision for a scenario (tags joined by '+')");
  predict->add_option("scenario", scenario_text, "Scenario, e.g. Home+Photo")->required();

  ReviewOptions review_opt;
  auto* review = app.add_subcommand("review", "Interactively review suggested label corrections");
  review->add_option("--cap", review_opt.cap, "Maximum number of suggestions")->check(CLI::PositiveNumber);
  review->add_option("--session", review_opt.session_path, "Session log path");
  review->add_option("--out", review_opt.out_path, "Where to write the updated dataset");
  review->add_flag("--resume", review_opt.resume, "Continue a saved session");

  TestGenOptions gen_opt;
  EvalOptions eval_opt;
  auto* eval = app.add_subcommand("eval", "Score predictions and baselines on test scenarios");
  eval->add_option("--tests", eval_opt.tests_path, "Test scenarios with ground truth");
  eval->add_flag("--generate", eval_opt.generate, "Generate random test scenarios");
  eval->add_option("--persona", gen_opt.persona_path, "Labeling rules for generated scenarios");
  eval->add_option("--count", gen_opt.count, "Number of generated scenarios (default rows/2)");
  eval->add_option("--max-tags", gen_opt.max_tags, "Maximum tags per generated scenario")
      ->check(CLI::PositiveNumber);
  eval->add_option("--report", eval_opt.report_path, "Write the JSON report here");
  eval->add_option("--text", eval_opt.text_path, "Write the text table here");

  auto* gen = app.add_subcommand("gen-tests", "Generate random test scenarios");
  gen->add_option("--count", gen_opt.count, "Number of scenarios (default rows/2)");
  gen->add_option("--max-tags", gen_opt.max_tags, "Maximum tags per scenario")->check(CLI::PositiveNumber);
  gen->add_option("--persona", gen_opt.persona_path, "Label scenarios with these rules");
  gen->add_option("--out", gen_opt.out_path, "Output file (default stdout)");

  app.add_subcommand("weights", "Print the resolved weight table");

  std::string csv_path;
  std::string csv_out;
  auto* import = app.add_subcommand("import-csv", "Convert a spreadsheet export to a dataset document");
  import->add_option("--csv", csv_path, "CSV file")->required();
  import->add_option("--out", csv_out, "Output file (default stdout)");

  std::string bind = "127.0.0.1:8080";
  std::string static_dir;
  auto* serve = app.add_subcommand("serve", "Run the HTTP API");
  serve->add_option("--bind", bind, "HOST:PORT");
  serve->add_option("--static", static_dir, "Directory with web console assets");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitInvalid;
  }

  try {
    if (*predict) return run_predict(g, scenario_text);
    if (*review) return run_review(g, review_opt);
    if (*eval) return run_eval(g, eval_opt, gen_opt);
    if (*gen) return run_gen_tests(g, gen_opt);
    if (app.got_subcommand("weights")) return run_weights(g);
    if (*import) return run_import_csv(csv_path, csv_out);
    if (*serve) return run_serve(g, bind, static_dir);
  } catch (const polex::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return e.code() == polex::ErrorCode::kIoError && !fs::exists(g.dataset) ? kExitInvalid
           : e.code() == polex::ErrorCode::kIoError                         ? kExitInternal
                                                                            : kExitInvalid;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return kExitInternal;
  }
  return kExitInternal;
}
