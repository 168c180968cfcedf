#include "polex/model.hpp"

#include <algorithm>
#include <cctype>
#include <unordered_map>

#include "polex/error.hpp"

namespace polex {

struct Universe::Data {
  std::vector<Tag> tags;
  std::unordered_map<std::string, TagId> index;
};

namespace {

bool is_blank(std::string_view s) {
  return std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isspace(c) != 0; });
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

}  // namespace

Universe Universe::build(std::span<const std::string> names) {
  if (names.empty()) throw Error(ErrorCode::kEmptyUniverse, "at least one tag is required");
  auto data = std::make_shared<Data>();
  data->tags.reserve(names.size());
  for (const auto& name : names) {
    if (name.empty() || is_blank(name)) {
      throw Error(ErrorCode::kEmptyName, "tag names must be non-empty",
                  "tags[" + std::to_string(data->tags.size()) + "]");
    }
    // '+' separates tags in scenario text and ',' separates CSV cells.
    if (name.find_first_of("+,") != std::string::npos || name != trim(name)) {
      throw Error(ErrorCode::kInvalidTagName,
                  "tag name '" + name + "' contains '+', ',' or surrounding whitespace");
    }
    const auto id = static_cast<TagId>(data->tags.size());
    if (!data->index.emplace(name, id).second) throw Error(ErrorCode::kDuplicateTag, name);
    data->tags.push_back(Tag{name, id});
  }
  return Universe(std::move(data));
}

std::size_t Universe::size() const noexcept { return data_->tags.size(); }

std::span<const Tag> Universe::tags() const noexcept { return data_->tags; }

const Tag& Universe::tag(TagId id) const {
  if (id >= data_->tags.size()) {
    throw Error(ErrorCode::kUnknownTag, "tag id " + std::to_string(id) + " out of range");
  }
  return data_->tags[id];
}

std::optional<TagId> Universe::find(std::string_view name) const {
  auto it = data_->index.find(std::string(name));
  if (it == data_->index.end()) return std::nullopt;
  return it->second;
}

TagId Universe::id_of(std::string_view name) const {
  if (auto id = find(name)) return *id;
  throw Error(ErrorCode::kUnknownTag, std::string(name));
}

bool Universe::same_as(const Universe& other) const noexcept {
  return data_ == other.data_ || data_->tags == other.data_->tags;
}

Universe build_universe(std::span<const std::string> names) { return Universe::build(names); }

Scenario Scenario::from_ids(const Universe& universe, std::vector<TagId> ids) {
  if (ids.empty()) throw Error(ErrorCode::kEmptyScenario, "a scenario needs at least one tag");
  for (TagId id : ids) {
    if (id >= universe.size()) {
      throw Error(ErrorCode::kUnknownTag, "tag id " + std::to_string(id) + " out of range");
    }
  }
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  return Scenario(universe, std::move(ids));
}

bool Scenario::contains(TagId id) const noexcept {
  return std::binary_search(members_.begin(), members_.end(), id);
}

std::vector<std::string> Scenario::names() const {
  std::vector<std::string> out;
  out.reserve(members_.size());
  for (TagId id : members_) out.push_back(universe_.name(id));
  return out;
}

Scenario make_scenario(const Universe& universe, std::span<const std::string> names) {
  std::vector<TagId> ids;
  ids.reserve(names.size());
  for (const auto& name : names) ids.push_back(universe.id_of(name));
  return Scenario::from_ids(universe, std::move(ids));
}

std::string format_scenario(const Scenario& scenario, std::string_view separator) {
  std::string out;
  for (TagId id : scenario.members()) {
    if (!out.empty()) out += separator;
    out += scenario.universe().name(id);
  }
  return out;
}

Scenario parse_scenario(const Universe& universe, std::string_view text) {
  std::vector<std::string> names;
  std::size_t start = 0;
  while (start <= text.size()) {
    auto end = text.find('+', start);
    if (end == std::string_view::npos) end = text.size();
    auto part = trim(text.substr(start, end - start));
    if (!part.empty()) {
      names.emplace_back(part);
    } else if (end != text.size() || start != 0) {
      throw Error(ErrorCode::kEmptyName, "empty tag in scenario '" + std::string(text) + "'");
    }
    start = end + 1;
  }
  return make_scenario(universe, names);
}

std::string_view to_string(Decision d) noexcept {
  return d == Decision::kAllow ? "allow" : "deny";
}

Decision decision_from_int(long long value) {
  if (value == 0) return Decision::kDeny;
  if (value == 1) return Decision::kAllow;
  throw Error(ErrorCode::kValidationError, "decision must be 0 or 1");
}

}  // namespace polex
