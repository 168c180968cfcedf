#include <openssl/evp.h>

#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <unordered_map>

#include "polex/error.hpp"
#include "polex/persistence.hpp"

namespace polex {

using nlohmann::json;

namespace {

[[noreturn]] void invalid(const std::string& rule, const std::string& where) {
  throw Error(ErrorCode::kValidationError, rule, where);
}

// Re-raises library errors from document content as ValidationError.
[[noreturn]] void rethrow_as_validation(const Error& e, const std::string& where) {
  std::string rule(to_string(e.code()));
  if (!e.detail().empty()) rule += ": " + e.detail();
  std::string locator = where;
  if (e.locator().rfind(where, 0) == 0) {
    locator = e.locator();
  } else if (!e.locator().empty()) {
    locator += "." + e.locator();
  }
  throw Error(ErrorCode::kValidationError, rule, locator, e.path());
}

const json& require(const json& obj, const char* key, const std::string& where) {
  auto it = obj.find(key);
  if (it == obj.end()) invalid(std::string("missing field '") + key + "'", where);
  return *it;
}

std::vector<std::string> string_list(const json& value, const std::string& where) {
  if (!value.is_array()) invalid("expected an array of strings", where);
  std::vector<std::string> out;
  for (std::size_t i = 0; i < value.size(); ++i) {
    if (!value[i].is_string()) invalid("expected a string", where + "[" + std::to_string(i) + "]");
    out.push_back(value[i].get<std::string>());
  }
  return out;
}

Scenario scenario_from(const json& value, const Universe& universe, const std::string& where) {
  const auto names = string_list(value, where);
  try {
    return make_scenario(universe, names);
  } catch (const Error& e) {
    rethrow_as_validation(e, where);
  }
}

json scenario_json(const Scenario& s) { return s.names(); }

WeightConfig config_from(const json& value, const Universe& universe, const std::string& where) {
  if (!value.is_object()) invalid("weight config must be an object", where);
  WeightConfig config;
  if (auto it = value.find("groups"); it != value.end()) {
    if (!it->is_array()) invalid("expected an array", where + ".groups");
    for (std::size_t g = 0; g < it->size(); ++g) {
      const std::string gw = where + ".groups[" + std::to_string(g) + "]";
      const json& group = (*it)[g];
      if (!group.is_object()) invalid("group must be an object", gw);
      const json& name = require(group, "name", gw);
      if (!name.is_string()) invalid("group name must be a string", gw + ".name");
      TagGroup tg{name.get<std::string>(), {}};
      const auto tags = string_list(require(group, "tags", gw), gw + ".tags");
      for (std::size_t i = 0; i < tags.size(); ++i) {
        auto id = universe.find(tags[i]);
        if (!id) invalid("UnknownTag: " + tags[i], gw + ".tags[" + std::to_string(i) + "]");
        tg.members.push_back(*id);
      }
      std::sort(tg.members.begin(), tg.members.end());
      config.groups.push_back(std::move(tg));
    }
  }
  if (auto it = value.find("order"); it != value.end()) {
    if (!it->is_array()) invalid("expected an array of [lesser, greater] pairs", where + ".order");
    for (std::size_t r = 0; r < it->size(); ++r) {
      const std::string rw = where + ".order[" + std::to_string(r) + "]";
      const json& rel = (*it)[r];
      if (!rel.is_array() || rel.size() != 2 || !rel[0].is_string() || !rel[1].is_string()) {
        invalid("relation must be [lesser, greater]", rw);
      }
      config.relations.push_back({rel[0].get<std::string>(), rel[1].get<std::string>()});
    }
  }
  try {
    validate_config(config, universe);
    group_levels(config);
  } catch (const Error& e) {
    rethrow_as_validation(e, where);
  }
  return config;
}

json config_json(const WeightConfig& config, const Universe& universe) {
  json groups = json::array();
  for (const auto& g : config.groups) {
    json tags = json::array();
    for (TagId id : g.members) tags.push_back(universe.name(id));
    groups.push_back({{"name", g.name}, {"tags", std::move(tags)}});
  }
  json order = json::array();
  for (const auto& r : config.relations) order.push_back(json::array({r.lesser, r.greater}));
  return {{"groups", std::move(groups)}, {"order", std::move(order)}};
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::vector<std::string> split_csv_line(std::string_view line) {
  std::vector<std::string> cells;
  std::size_t start = 0;
  for (;;) {
    auto end = line.find(',', start);
    cells.emplace_back(trim(line.substr(start, end == std::string_view::npos ? end : end - start)));
    if (end == std::string_view::npos) break;
    start = end + 1;
  }
  return cells;
}

}  // namespace

Dataset dataset_from_json(const json& doc, std::vector<std::string>* warnings) {
  if (!doc.is_object()) invalid("dataset document must be a JSON object", "$");
  const json& version = require(doc, "version", "$");
  if (!version.is_number_integer() || version.get<int>() != kDocumentVersion) {
    invalid("unsupported version (expected " + std::to_string(kDocumentVersion) + ")", "version");
  }

  const auto tag_names = string_list(require(doc, "tags", "$"), "tags");
  std::optional<Universe> universe;
  try {
    universe = Universe::build(tag_names);
  } catch (const Error& e) {
    rethrow_as_validation(e, "tags");
  }

  std::vector<PolicyTarget> targets;
  for (auto& name : string_list(require(doc, "targets", "$"), "targets")) targets.push_back({name});
  std::optional<Dataset> dataset;
  try {
    dataset.emplace(*universe, targets);
  } catch (const Error& e) {
    rethrow_as_validation(e, "targets");
  }

  const json& rows = require(doc, "rows", "$");
  if (!rows.is_array()) invalid("rows must be an array", "rows");
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const std::string rw = "rows[" + std::to_string(r) + "]";
    const json& row = rows[r];
    if (!row.is_object()) invalid("row must be an object", rw);
    Scenario scenario = scenario_from(require(row, "scenario", rw), *universe, rw + ".scenario");
    const json& decisions = require(row, "decisions", rw);
    if (!decisions.is_object()) invalid("decisions must be an object", rw + ".decisions");
    for (auto it = decisions.begin(); it != decisions.end(); ++it) {
      if (!dataset->find_target(it.key())) invalid("UnknownTarget: " + it.key(), rw + ".decisions");
    }
    std::vector<Decision> values;
    for (const auto& target : targets) {
      const std::string dw = rw + ".decisions." + target.name;
      auto it = decisions.find(target.name);
      if (it == decisions.end()) invalid("missing decision for target '" + target.name + "'", dw);
      if (!it->is_number_integer() || (it->get<long long>() != 0 && it->get<long long>() != 1)) {
        invalid("decision must be 0 or 1", dw);
      }
      values.push_back(decision_from_int(it->get<long long>()));
    }
    try {
      if (dataset->add_row(scenario, std::move(values)) == RowInsert::kDuplicateIgnored && warnings) {
        warnings->push_back(rw + ": duplicate of an earlier row with identical decisions, ignored");
      }
    } catch (const Error& e) {
      rethrow_as_validation(e, rw);
    }
  }

  if (auto it = doc.find("weights"); it != doc.end() && !it->is_null()) {
    if (!it->is_object()) invalid("weights must be an object", "weights");
    if (auto g = it->find("global"); g != it->end() && !g->is_null()) {
      dataset->set_global_weights(config_from(*g, *universe, "weights.global"));
    }
    if (auto t = it->find("targets"); t != it->end() && !t->is_null()) {
      if (!t->is_object()) invalid("weights.targets must be an object", "weights.targets");
      for (auto cfg = t->begin(); cfg != t->end(); ++cfg) {
        const std::string where = "weights.targets." + cfg.key();
        auto index = dataset->find_target(cfg.key());
        if (!index) invalid("UnknownTarget: " + cfg.key(), where);
        dataset->set_target_weights(*index, config_from(cfg.value(), *universe, where));
      }
    }
  }
  return std::move(*dataset);
}

Dataset parse_dataset(std::string_view text, std::vector<std::string>* warnings) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::kParseError, e.what(), "byte " + std::to_string(e.byte));
  }
  return dataset_from_json(doc, warnings);
}

json dataset_to_json(const Dataset& dataset) {
  const Universe& universe = dataset.universe();
  json tags = json::array();
  for (const auto& tag : universe.tags()) tags.push_back(tag.name);
  json targets = json::array();
  for (const auto& t : dataset.targets()) targets.push_back(t.name);
  json rows = json::array();
  for (const auto& row : dataset.rows()) {
    json decisions = json::object();
    for (std::size_t t = 0; t < dataset.targets().size(); ++t) {
      decisions[dataset.targets()[t].name] = to_int(row.decisions[t]);
    }
    rows.push_back({{"decisions", std::move(decisions)}, {"scenario", scenario_json(row.scenario)}});
  }
  json weights = json::object();
  if (const auto& global = dataset.global_weights()) weights["global"] = config_json(*global, universe);
  json per_target = json::object();
  for (std::size_t t = 0; t < dataset.targets().size(); ++t) {
    if (const WeightConfig* cfg = dataset.target_weights(t)) {
      per_target[dataset.targets()[t].name] = config_json(*cfg, universe);
    }
  }
  if (!per_target.empty()) weights["targets"] = std::move(per_target);
  return {{"rows", std::move(rows)},
          {"tags", std::move(tags)},
          {"targets", std::move(targets)},
          {"version", kDocumentVersion},
          {"weights", std::move(weights)}};
}

std::string dump_canonical(const json& doc) { return doc.dump(2) + "\n"; }

std::string serialize_dataset(const Dataset& dataset) { return dump_canonical(dataset_to_json(dataset)); }

Dataset import_csv(std::string_view text, std::vector<std::string>* warnings) {
  std::vector<std::vector<std::string>> lines;
  std::vector<std::size_t> line_numbers;
  std::istringstream in{std::string(text)};
  std::string line;
  for (std::size_t n = 1; std::getline(in, line); ++n) {
    if (trim(line).empty()) continue;
    lines.push_back(split_csv_line(line));
    line_numbers.push_back(n);
  }
  if (lines.empty()) invalid("CSV input is empty", "line 1");
  const auto& header = lines.front();
  if (header.empty() || header[0] != "scenario") invalid("first column must be 'scenario'", "line 1");

  std::vector<PolicyTarget> targets;
  for (std::size_t c = 1; c < header.size(); ++c) targets.push_back({header[c]});

  // Tags are declared in order of first appearance.
  std::vector<std::string> tag_names;
  std::unordered_map<std::string, bool> seen;
  std::vector<std::vector<std::string>> scenarios;
  for (std::size_t r = 1; r < lines.size(); ++r) {
    const std::string where = "line " + std::to_string(line_numbers[r]);
    if (lines[r].size() != header.size()) {
      invalid("expected " + std::to_string(header.size()) + " cells", where);
    }
    std::vector<std::string> names;
    std::string_view cell = lines[r][0];
    std::size_t start = 0;
    for (;;) {
      auto end = cell.find('+', start);
      auto part = trim(cell.substr(start, end == std::string_view::npos ? end : end - start));
      if (part.empty()) invalid("empty tag in scenario cell", where);
      names.emplace_back(part);
      if (seen.emplace(names.back(), true).second) tag_names.push_back(names.back());
      if (end == std::string_view::npos) break;
      start = end + 1;
    }
    scenarios.push_back(std::move(names));
  }

  json doc;
  doc["version"] = kDocumentVersion;
  doc["tags"] = tag_names;
  json target_names = json::array();
  for (const auto& t : targets) target_names.push_back(t.name);
  doc["targets"] = target_names;
  doc["rows"] = json::array();
  for (std::size_t r = 1; r < lines.size(); ++r) {
    const std::string where = "line " + std::to_string(line_numbers[r]);
    json decisions = json::object();
    for (std::size_t c = 1; c < header.size(); ++c) {
      const std::string& cell = lines[r][c];
      if (cell != "0" && cell != "1") invalid("decision must be 0 or 1", where + ", column " + header[c]);
      decisions[header[c]] = cell == "1" ? 1 : 0;
    }
    doc["rows"].push_back({{"scenario", scenarios[r - 1]}, {"decisions", std::move(decisions)}});
  }
  if (tag_names.empty()) invalid("CSV has no rows", "line 1");
  return dataset_from_json(doc, warnings);
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIoError, "cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw Error(ErrorCode::kIoError, "cannot read " + path.string());
  return buf.str();
}

void write_file_atomic(const std::filesystem::path& path, std::string_view contents) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::kIoError, "cannot write " + tmp.string());
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    if (!out) throw Error(ErrorCode::kIoError, "write failed for " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw Error(ErrorCode::kIoError, "cannot replace " + path.string() + ": " + ec.message());
}

json read_json_file(const std::filesystem::path& path) {
  const std::string text = read_file(path);
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::kParseError, e.what(), path.string() + ", byte " + std::to_string(e.byte));
  }
}

Dataset load_dataset(const std::filesystem::path& path, std::vector<std::string>* warnings) {
  if (path.extension() == ".csv") return import_csv(read_file(path), warnings);
  return dataset_from_json(read_json_file(path), warnings);
}

void save_dataset(const Dataset& dataset, const std::filesystem::path& path) {
  write_file_atomic(path, serialize_dataset(dataset));
}

std::string fingerprint(const Dataset& dataset) {
  const std::string text = serialize_dataset(dataset);
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(text.data(), text.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
    throw Error(ErrorCode::kIoError, "SHA-256 failed");
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  out.reserve(2 * len);
  for (unsigned int i = 0; i < len; ++i) {
    out += kHex[digest[i] >> 4];
    out += kHex[digest[i] & 0xf];
  }
  return out;
}

}  // namespace polex
