#pragma once

#include <compare>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace polex {

using TagId = std::uint32_t;

struct Tag {
  std::string name;
  TagId id = 0;

  friend bool operator==(const Tag&, const Tag&) = default;
};

// Ordered, duplicate-free tag vocabulary. Ids are dense and equal to the
// insertion rank. Copies share the same immutable storage.
class Universe {
 public:
  // Rejects empty input, empty/blank names, names containing '+' or ',',
  // and duplicates.
  static Universe build(std::span<const std::string> names);

  std::size_t size() const noexcept;
  std::span<const Tag> tags() const noexcept;
  const Tag& tag(TagId id) const;
  const std::string& name(TagId id) const { return tag(id).name; }

  std::optional<TagId> find(std::string_view name) const;
  // Throws UnknownTag.
  TagId id_of(std::string_view name) const;

  // True when both refer to the same storage or carry identical tag lists.
  bool same_as(const Universe& other) const noexcept;

  friend bool operator==(const Universe& a, const Universe& b) noexcept {
    return a.same_as(b);
  }

 private:
  struct Data;
  explicit Universe(std::shared_ptr<const Data> data) : data_(std::move(data)) {}
  std::shared_ptr<const Data> data_;
};

Universe build_universe(std::span<const std::string> names);

// A conjunction of tags: a non-empty set of tag ids in ascending order.
class Scenario {
 public:
  // Collapses repeats and sorts. Throws EmptyScenario / UnknownTag.
  static Scenario from_ids(const Universe& universe, std::vector<TagId> ids);

  std::span<const TagId> members() const noexcept { return members_; }
  std::size_t size() const noexcept { return members_.size(); }
  bool contains(TagId id) const noexcept;
  const Universe& universe() const noexcept { return universe_; }

  std::vector<std::string> names() const;

  friend bool operator==(const Scenario& a, const Scenario& b) noexcept {
    return a.members_ == b.members_ && a.universe_.same_as(b.universe_);
  }
  // Orders by member ids (lexicographic); universes are not compared.
  friend std::strong_ordering operator<=>(const Scenario& a, const Scenario& b) noexcept {
    return a.members_ <=> b.members_;
  }

 private:
  Scenario(Universe universe, std::vector<TagId> members)
      : universe_(std::move(universe)), members_(std::move(members)) {}

  Universe universe_;
  std::vector<TagId> members_;
};

Scenario make_scenario(const Universe& universe, std::span<const std::string> names);

// `Home+Photo` style text, in canonical id order.
std::string format_scenario(const Scenario& scenario, std::string_view separator = "+");
// Parses `Home+Photo`; surrounding whitespace around each tag is ignored.
Scenario parse_scenario(const Universe& universe, std::string_view text);

enum class Decision : std::uint8_t { kDeny = 0, kAllow = 1 };

constexpr Decision flip(Decision d) noexcept {
  return d == Decision::kAllow ? Decision::kDeny : Decision::kAllow;
}
constexpr int to_int(Decision d) noexcept { return static_cast<int>(d); }
std::string_view to_string(Decision d) noexcept;  // "allow" / "deny"
// Throws ValidationError unless value is 0 or 1.
Decision decision_from_int(long long value);

struct PolicyTarget {
  std::string name;

  friend bool operator==(const PolicyTarget&, const PolicyTarget&) = default;
};

struct LabeledExample {
  Scenario scenario;
  Decision decision;

  friend bool operator==(const LabeledExample&, const LabeledExample&) = default;
};

}  // namespace polex
