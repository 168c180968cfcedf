#include "polex/metric.hpp"

#include <algorithm>
#include <iterator>

#include "polex/error.hpp"

namespace polex {

std::string Similarity::to_string() const {
  const BigInt num = numerator();
  const BigInt den = denominator();
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

void WeightTable::set(TagId id, WeightPair pair) {
  if (pair.w0 == 0 || pair.w1 == 0) {
    throw Error(ErrorCode::kInvalidWeight, "weights must be positive integers",
                "tag " + std::to_string(id));
  }
  if (id >= pairs_.size()) pairs_.resize(id + 1);
  pairs_[id] = pair;
}

bool WeightTable::is_uniform() const noexcept {
  return std::all_of(pairs_.begin(), pairs_.end(),
                     [](const WeightPair& p) { return p == WeightPair{}; });
}

bool operator==(const WeightTable& a, const WeightTable& b) noexcept {
  const std::size_t n = std::max(a.size(), b.size());
  for (std::size_t i = 0; i < n; ++i) {
    if (a.at(static_cast<TagId>(i)) != b.at(static_cast<TagId>(i))) return false;
  }
  return true;
}

DifferenceProfile difference_profile(const Scenario& a, const Scenario& b) {
  if (!a.universe().same_as(b.universe())) {
    throw Error(ErrorCode::kUniverseMismatch, "scenarios belong to different universes");
  }
  DifferenceProfile p;
  const auto lhs = a.members();
  const auto rhs = b.members();
  std::set_difference(lhs.begin(), lhs.end(), rhs.begin(), rhs.end(),
                      std::back_inserter(p.only_left));
  std::set_difference(rhs.begin(), rhs.end(), lhs.begin(), lhs.end(),
                      std::back_inserter(p.only_right));
  std::set_intersection(lhs.begin(), lhs.end(), rhs.begin(), rhs.end(),
                        std::back_inserter(p.shared));
  p.k1 = p.only_left.size();
  p.k2 = p.only_right.size();
  p.k = p.k1 + p.k2 + p.shared.size();
  return p;
}

namespace {

BigInt pow2(std::size_t e) { return BigInt(1) << e; }

// prod(w0 + w1) - prod(w0) over `ids`.
BigInt excess_weight(const std::vector<TagId>& ids, const WeightTable& w) {
  BigInt total = 1;
  BigInt absent = 1;
  for (TagId id : ids) {
    const WeightPair p = w.at(id);
    total *= BigInt(p.w0) + p.w1;
    absent *= p.w0;
  }
  return total - absent;
}

}  // namespace

Similarity mu(const Scenario& a, const Scenario& b) {
  const DifferenceProfile p = difference_profile(a, b);
  const BigInt diff = pow2(p.k1) + pow2(p.k2) - 2;
  return Similarity(Rational(1) - Rational(diff, pow2(p.k)));
}

Similarity mu_weighted(const Scenario& a, const Scenario& b, const WeightTable& weights) {
  const DifferenceProfile p = difference_profile(a, b);
  const BigInt z1 = excess_weight(p.only_right, weights);
  const BigInt z2 = excess_weight(p.only_left, weights);
  BigInt z = 1;
  for (const auto* part : {&p.only_left, &p.only_right, &p.shared}) {
    for (TagId id : *part) {
      const WeightPair w = weights.at(id);
      z *= BigInt(w.w0) + w.w1;
    }
  }
  return Similarity(Rational(1) - Rational(z1 + z2, z));
}

}  // namespace polex
