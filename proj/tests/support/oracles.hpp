#pragma once

// Brute-force reference implementations. They share no code with the
// library beyond the data model, and stay small enough to check by eye.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "polex/metric.hpp"
#include "polex/model.hpp"
#include "polex/predictor.hpp"

namespace oracle {

struct TooLargeForOracle : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline constexpr std::size_t kMaxVars = 24;

// Tags mentioned by either scenario, ascending.
std::vector<polex::TagId> union_vars(const polex::Scenario& a, const polex::Scenario& b);

// Number of assignments over the union variables on which exactly one of the
// two conjunctions holds. Throws TooLargeForOracle past kMaxVars variables.
std::uint64_t xor_count(const polex::Scenario& a, const polex::Scenario& b);

// 1 - xor_count / 2^k as an exact fraction.
polex::Rational mu(const polex::Scenario& a, const polex::Scenario& b);

// Weighted variant by enumeration. For the assignments on which a holds and
// b fails, only b's private variables vary; each contributes the weight of its
// complemented value. Symmetrically for b holds and a fails. The total is the
// weighted mass of all assignments over the union.
polex::Rational mu_weighted(const polex::Scenario& a, const polex::Scenario& b,
                            const polex::WeightTable& weights);

struct RefPrediction {
  polex::Decision decision = polex::Decision::kDeny;
  polex::Provenance provenance = polex::Provenance::kDefaultDeny;
  std::vector<std::size_t> neighbors;
  std::optional<std::size_t> removed;
};

// Literal replay of the prediction rule using mu_weighted above.
RefPrediction predict(const polex::Scenario& query, const std::vector<polex::LabeledExample>& labeled,
                      const polex::WeightTable& weights);

// N(v) over every other example, as index lists.
std::vector<std::vector<std::size_t>> neighbor_lists(const std::vector<polex::LabeledExample>& labeled,
                                                     const polex::WeightTable& weights);

std::size_t violation_count(const std::vector<std::vector<std::size_t>>& adjacency,
                            const std::vector<polex::Decision>& labels);

// Best single-flip decrease over the given candidate vertices, recomputing
// V(G) from scratch for every flip.
std::int64_t best_flip_gain(const std::vector<std::vector<std::size_t>>& adjacency,
                            const std::vector<polex::Decision>& labels,
                            const std::vector<bool>& excluded);

std::int64_t flip_gain(const std::vector<std::vector<std::size_t>>& adjacency,
                       const std::vector<polex::Decision>& labels, std::size_t v);

}  // namespace oracle
