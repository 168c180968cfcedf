#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "polex/active_learning.hpp"
#include "polex/dataset.hpp"
#include "polex/evaluation.hpp"
#include "polex/predictor.hpp"

namespace polex {

inline constexpr int kDocumentVersion = 1;

// ---- Dataset documents ------------------------------------------------------
//
// {
//   "rows":    [{"decisions": {"<target>": 0|1, ...}, "scenario": ["<tag>", ...]}, ...],
//   "tags":    ["<tag>", ...],
//   "targets": ["<target>", ...],
//   "version": 1,
//   "weights": {"global":  {"groups": [{"name": "...", "tags": [...]}, ...],
//                           "order":  [["<lesser>", "<greater>"], ...]},
//               "targets": {"<target>": {...same shape...}}}
// }
//
// Keys are sorted, scenario and group tags are in tag-declaration order, two
// spaces of indentation, trailing newline. Structurally equal datasets
// serialize to identical bytes.

// Throws ParseError for malformed JSON, ValidationError (with a locator) for
// everything else. Identical duplicate rows are dropped; a note is appended
// to `warnings` when given.
Dataset parse_dataset(std::string_view text, std::vector<std::string>* warnings = nullptr);
Dataset dataset_from_json(const nlohmann::json& doc, std::vector<std::string>* warnings = nullptr);
nlohmann::json dataset_to_json(const Dataset& dataset);
std::string serialize_dataset(const Dataset& dataset);

// Dispatches on extension: ".csv" goes through import_csv, anything else is JSON.
Dataset load_dataset(const std::filesystem::path& path, std::vector<std::string>* warnings = nullptr);
// Writes the canonical JSON document (via a temporary file and rename).
void save_dataset(const Dataset& dataset, const std::filesystem::path& path);

// Spreadsheet import: header `scenario,<target>,...`; scenario cells are tag
// names joined by '+'; decision cells are 0 or 1. Tags are declared in order
// of first appearance. Produces a dataset without weight configs.
Dataset import_csv(std::string_view text, std::vector<std::string>* warnings = nullptr);

// Lowercase hex SHA-256 of serialize_dataset(dataset).
std::string fingerprint(const Dataset& dataset);

// ---- Review sessions --------------------------------------------------------

nlohmann::json session_to_json(const ReviewSession& session, const Dataset& dataset);
void save_session(const ReviewSession& session, const Dataset& dataset,
                  const std::filesystem::path& path);
// Rebuilds the session against `dataset` (which must carry any labels the
// session already accepted). Throws FingerprintMismatch when the dataset
// changed since the session was saved.
ReviewSession resume_session(const std::filesystem::path& path, const Dataset& dataset);
ReviewSession session_from_json(const nlohmann::json& doc, const Dataset& dataset);

// ---- Test scenarios, personas, reports --------------------------------------
//
// Tests: {"version": 1, "tests": [{"scenario": [...], "truth": {"<target>": 0|1}}]}
// `truth` is omitted for unlabeled scenarios.

nlohmann::json tests_to_json(std::span<const Scenario> scenarios);
nlohmann::json tests_to_json(std::span<const TestCase> tests);
// Scenarios and any ground truth. Missing truth stays empty (run_eval rejects it).
std::vector<TestCase> tests_from_json(const nlohmann::json& doc, const Dataset& dataset);

// Persona: {"version": 1, "rules": {"<target>": {"deny_if_any": [...], "allow_if_any": [...],
//            "unknown_if_any": [...], "otherwise": 0|1}}}
Persona persona_from_json(const nlohmann::json& doc, const Universe& universe);

nlohmann::json report_to_json(const EvalReport& report);
std::string report_to_text(const EvalReport& report);

// Prediction explanation: decision, provenance, vote, neighbors with exact
// fraction strings, the removed neighbor (tie-break), and query tags that
// no training example uses.
nlohmann::json prediction_to_json(const Scenario& query, const Prediction& prediction,
                                  std::span<const LabeledExample> labeled);
std::string scenario_label(const Scenario& scenario);  // "{Home,Memo}"

nlohmann::json weight_table_to_json(const WeightTable& table, const Universe& universe);

// ---- File helpers -----------------------------------------------------------

std::string read_file(const std::filesystem::path& path);         // throws IoError
void write_file_atomic(const std::filesystem::path& path, std::string_view contents);
nlohmann::json read_json_file(const std::filesystem::path& path);  // throws IoError / ParseError
std::string dump_canonical(const nlohmann::json& doc);             // indent 2 + newline

}  // namespace polex
