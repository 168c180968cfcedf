#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "polex/model.hpp"

namespace polex {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

// Exact similarity in (0, 1]; 1 only for identical scenarios.
class Similarity {
 public:
  Similarity() = default;
  explicit Similarity(Rational value) : value_(std::move(value)) {}

  const Rational& value() const noexcept { return value_; }
  BigInt numerator() const { return boost::multiprecision::numerator(value_); }
  BigInt denominator() const { return boost::multiprecision::denominator(value_); }

  // Reduced fraction "5/6"; whole numbers print without a denominator ("1").
  std::string to_string() const;
  double to_double() const { return value_.convert_to<double>(); }

  friend bool operator==(const Similarity& a, const Similarity& b) { return a.value_ == b.value_; }
  friend std::strong_ordering operator<=>(const Similarity& a, const Similarity& b) {
    if (a.value_ < b.value_) return std::strong_ordering::less;
    if (b.value_ < a.value_) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
  }

 private:
  Rational value_{0};
};

// Weights for a tag being absent (w0) and present (w1). Both are >= 1.
struct WeightPair {
  std::uint64_t w0 = 1;
  std::uint64_t w1 = 1;

  friend bool operator==(const WeightPair&, const WeightPair&) = default;
};

// Total map from tag id to WeightPair; ids beyond the stored range read as (1,1).
class WeightTable {
 public:
  WeightTable() = default;
  explicit WeightTable(std::size_t tag_count) : pairs_(tag_count) {}

  static WeightTable uniform(std::size_t tag_count) { return WeightTable(tag_count); }

  // Throws InvalidWeight for a zero component.
  void set(TagId id, WeightPair pair);
  WeightPair at(TagId id) const noexcept {
    return id < pairs_.size() ? pairs_[id] : WeightPair{};
  }
  std::size_t size() const noexcept { return pairs_.size(); }
  bool is_uniform() const noexcept;

  friend bool operator==(const WeightTable& a, const WeightTable& b) noexcept;

 private:
  std::vector<WeightPair> pairs_;
};

struct DifferenceProfile {
  std::vector<TagId> only_left;   // in a, not in b
  std::vector<TagId> only_right;  // in b, not in a
  std::vector<TagId> shared;
  std::size_t k1 = 0;  // |only_left|
  std::size_t k2 = 0;  // |only_right|
  std::size_t k = 0;   // |a ∪ b|
};

// Throws UniverseMismatch when the scenarios come from different universes.
DifferenceProfile difference_profile(const Scenario& a, const Scenario& b);

// 1 - (2^k1 + 2^k2 - 2) / 2^k.
Similarity mu(const Scenario& a, const Scenario& b);

// 1 - (z1 + z2) / z where, over the tags present in only one side,
//   z1 = prod_{only_right}(w0 + w1) - prod_{only_right} w0
//   z2 = prod_{only_left}(w0 + w1)  - prod_{only_left} w0
// and z = prod_{a ∪ b}(w0 + w1). Empty products are 1.
Similarity mu_weighted(const Scenario& a, const Scenario& b, const WeightTable& weights);

}  // namespace polex
