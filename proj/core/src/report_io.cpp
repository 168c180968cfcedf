#include <cstdio>
#include <set>
#include <sstream>

#include "polex/error.hpp"
#include "polex/persistence.hpp"

namespace polex {

using nlohmann::json;

namespace {

json accuracy_json(const AccuracyCount& a) {
  return {{"accuracy", a.accuracy()}, {"correct", a.correct}, {"total", a.total}};
}

std::string fixed3(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  return buf;
}

std::vector<TagId> tag_ids(const json& value, const Universe& universe, const std::string& where) {
  if (!value.is_array()) throw Error(ErrorCode::kValidationError, "expected an array of tags", where);
  std::vector<TagId> ids;
  for (const auto& name : value) {
    if (!name.is_string()) throw Error(ErrorCode::kValidationError, "expected a tag name", where);
    auto id = universe.find(name.get<std::string>());
    if (!id) throw Error(ErrorCode::kValidationError, "UnknownTag: " + name.get<std::string>(), where);
    ids.push_back(*id);
  }
  return ids;
}

}  // namespace

std::string scenario_label(const Scenario& scenario) {
  return "{" + format_scenario(scenario, ",") + "}";
}

json prediction_to_json(const Scenario& query, const Prediction& prediction,
                        std::span<const LabeledExample> labeled) {
  json neighbors = json::array();
  for (std::size_t i : prediction.neighbors.members) {
    neighbors.push_back({{"decision", std::string(to_string(labeled[i].decision))},
                         {"index", i},
                         {"scenario", labeled[i].scenario.names()},
                         {"similarity", prediction.neighbors.similarity.to_string()}});
  }
  json removed = nullptr;
  if (prediction.removed) {
    const auto& ex = labeled[*prediction.removed];
    removed = {{"decision", std::string(to_string(ex.decision))},
               {"index", *prediction.removed},
               {"scenario", ex.scenario.names()}};
  }
  std::set<TagId> seen;
  for (const auto& ex : labeled) seen.insert(ex.scenario.members().begin(), ex.scenario.members().end());
  json unseen = json::array();
  for (TagId id : query.members()) {
    if (seen.count(id) == 0) unseen.push_back(query.universe().name(id));
  }
  return {{"decision", std::string(to_string(prediction.decision))},
          {"neighbors", std::move(neighbors)},
          {"provenance", std::string(to_string(prediction.provenance))},
          {"query", query.names()},
          {"removed", std::move(removed)},
          {"similarity", prediction.neighbors.similarity.to_string()},
          {"unseen_tags", std::move(unseen)},
          {"vote", {{"allow", prediction.vote.allow}, {"deny", prediction.vote.deny}}}};
}

json weight_table_to_json(const WeightTable& table, const Universe& universe) {
  json out = json::array();
  for (const auto& tag : universe.tags()) {
    const WeightPair p = table.at(tag.id);
    out.push_back({{"tag", tag.name}, {"w0", p.w0}, {"w1", p.w1}});
  }
  return out;
}

json tests_to_json(std::span<const Scenario> scenarios) {
  json tests = json::array();
  for (const auto& s : scenarios) tests.push_back({{"scenario", s.names()}});
  return {{"tests", std::move(tests)}, {"version", kDocumentVersion}};
}

json tests_to_json(std::span<const TestCase> cases) {
  json tests = json::array();
  for (const auto& tc : cases) {
    json truth = json::object();
    for (const auto& [target, d] : tc.truth) truth[target] = to_int(d);
    tests.push_back({{"scenario", tc.scenario.names()}, {"truth", std::move(truth)}});
  }
  return {{"tests", std::move(tests)}, {"version", kDocumentVersion}};
}

std::vector<TestCase> tests_from_json(const json& doc, const Dataset& dataset) {
  if (!doc.is_object() || doc.value("version", 0) != kDocumentVersion) {
    throw Error(ErrorCode::kValidationError, "unsupported tests document", "version");
  }
  auto it = doc.find("tests");
  if (it == doc.end() || !it->is_array()) {
    throw Error(ErrorCode::kValidationError, "missing 'tests' array", "tests");
  }
  std::vector<TestCase> out;
  for (std::size_t i = 0; i < it->size(); ++i) {
    const std::string where = "tests[" + std::to_string(i) + "]";
    const json& entry = (*it)[i];
    if (!entry.is_object() || !entry.contains("scenario")) {
      throw Error(ErrorCode::kValidationError, "test needs a scenario", where);
    }
    std::vector<TagId> ids = tag_ids(entry["scenario"], dataset.universe(), where + ".scenario");
    if (ids.empty()) throw Error(ErrorCode::kValidationError, "EmptyScenario", where + ".scenario");
    TestCase tc{Scenario::from_ids(dataset.universe(), std::move(ids)), {}};
    if (auto truth = entry.find("truth"); truth != entry.end()) {
      if (!truth->is_object()) throw Error(ErrorCode::kValidationError, "truth must be an object", where);
      for (auto t = truth->begin(); t != truth->end(); ++t) {
        if (!dataset.find_target(t.key())) {
          throw Error(ErrorCode::kValidationError, "UnknownTarget: " + t.key(), where + ".truth");
        }
        if (!t->is_number_integer() || (t->get<long long>() != 0 && t->get<long long>() != 1)) {
          throw Error(ErrorCode::kValidationError, "decision must be 0 or 1", where + ".truth." + t.key());
        }
        tc.truth.emplace(t.key(), decision_from_int(t->get<long long>()));
      }
    }
    out.push_back(std::move(tc));
  }
  return out;
}

Persona persona_from_json(const json& doc, const Universe& universe) {
  if (!doc.is_object() || doc.value("version", 0) != kDocumentVersion) {
    throw Error(ErrorCode::kValidationError, "unsupported persona document", "version");
  }
  auto rules = doc.find("rules");
  if (rules == doc.end() || !rules->is_object()) {
    throw Error(ErrorCode::kValidationError, "missing 'rules' object", "rules");
  }
  Persona persona;
  for (auto it = rules->begin(); it != rules->end(); ++it) {
    const std::string where = "rules." + it.key();
    const json& r = it.value();
    if (!r.is_object()) throw Error(ErrorCode::kValidationError, "rule must be an object", where);
    TagRule rule;
    if (r.contains("unknown_if_any")) rule.unknown_if_any = tag_ids(r["unknown_if_any"], universe, where);
    if (r.contains("deny_if_any")) rule.deny_if_any = tag_ids(r["deny_if_any"], universe, where);
    if (r.contains("allow_if_any")) rule.allow_if_any = tag_ids(r["allow_if_any"], universe, where);
    if (r.contains("otherwise")) {
      const json& o = r["otherwise"];
      if (!o.is_number_integer() || (o.get<long long>() != 0 && o.get<long long>() != 1)) {
        throw Error(ErrorCode::kValidationError, "decision must be 0 or 1", where + ".otherwise");
      }
      rule.otherwise = decision_from_int(o.get<long long>());
    }
    persona.rules.emplace(it.key(), std::move(rule));
  }
  return persona;
}

json report_to_json(const EvalReport& report) {
  json targets = json::array();
  for (const auto& t : report.targets) {
    json records = json::array();
    for (const auto& rec : t.records) {
      json removed = nullptr;
      if (rec.prediction.removed) removed = *rec.prediction.removed;
      records.push_back({{"coinflip", std::string(to_string(rec.coinflip))},
                         {"decision", std::string(to_string(rec.prediction.decision))},
                         {"neighbors", rec.prediction.neighbors.members},
                         {"provenance", std::string(to_string(rec.prediction.provenance))},
                         {"removed", std::move(removed)},
                         {"scenario", rec.query.names()},
                         {"similarity", rec.prediction.neighbors.similarity.to_string()},
                         {"truth", std::string(to_string(rec.truth))},
                         {"vote", {{"allow", rec.prediction.vote.allow}, {"deny", rec.prediction.vote.deny}}}});
    }
    targets.push_back({{"accuracy",
                        {{"coinflip", accuracy_json(t.coinflip)},
                         {"engine", accuracy_json(t.engine)},
                         {"mostfreq", accuracy_json(t.mostfreq)}}},
                       {"mostfreq_label", std::string(to_string(t.mostfreq_label))},
                       {"records", std::move(records)},
                       {"target", t.target},
                       {"ties",
                        {{"default_denied", t.ties.default_denied},
                         {"no_majority", t.ties.no_majority},
                         {"resolved_by_elimination", t.ties.resolved_by_elimination}}},
                       {"training_rows", t.training_rows}});
  }
  return {{"seed", report.seed},
          {"targets", std::move(targets)},
          {"test_count", report.test_count},
          {"totals",
           {{"coinflip", accuracy_json(report.coinflip_total())},
            {"engine", accuracy_json(report.engine_total())},
            {"mostfreq", accuracy_json(report.mostfreq_total())}}},
          {"version", kDocumentVersion}};
}

std::string report_to_text(const EvalReport& report) {
  std::ostringstream out;
  std::size_t width = 6;
  for (const auto& t : report.targets) width = std::max(width, t.target.size());
  auto pad = [width](const std::string& s) { return s + std::string(width - s.size() + 2, ' '); };
  out << "seed " << report.seed << ", " << report.test_count << " test scenarios\n";
  out << pad("target") << "engine  coinflip  mostfreq  no-majority  eliminated  default-deny\n";
  auto row = [&](const std::string& name, const AccuracyCount& e, const AccuracyCount& c,
                 const AccuracyCount& m, const TieStats* ties) {
    out << pad(name) << fixed3(e.accuracy()) << "   " << fixed3(c.accuracy()) << "     "
        << fixed3(m.accuracy());
    if (ties) {
      out << "     " << ties->no_majority << std::string(13 - std::to_string(ties->no_majority).size(), ' ')
          << ties->resolved_by_elimination
          << std::string(12 - std::to_string(ties->resolved_by_elimination).size(), ' ')
          << ties->default_denied;
    }
    out << '\n';
  };
  TieStats all;
  for (const auto& t : report.targets) {
    row(t.target, t.engine, t.coinflip, t.mostfreq, &t.ties);
    all.no_majority += t.ties.no_majority;
    all.resolved_by_elimination += t.ties.resolved_by_elimination;
    all.default_denied += t.ties.default_denied;
  }
  row("total", report.engine_total(), report.coinflip_total(), report.mostfreq_total(), &all);
  return out.str();
}

}  // namespace polex
