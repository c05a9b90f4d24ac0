#pragma once

#include <optional>
#include <string>
#include <vector>

#include "graphnli/linalg.hpp"

namespace graphnli {

enum class AggregationStrategy { Sum, Average, WeightedAverage };

const char* aggregation_name(AggregationStrategy strategy);
AggregationStrategy aggregation_from_name(const std::string& name);

// Combines walk-sampled neighbor embeddings into the context vector v:
//   Sum              v = sum_i e_i
//   Average          v = sum_i e_i / n
//   WeightedAverage  v = sum_i w_i e_i / sum_i w_i
// WeightedAverage normalizes by the weight sum so v stays on the encoder's
// scale regardless of walk depth.
Vec aggregate(const std::vector<Vec>& embeddings, const std::optional<std::vector<double>>& weights,
              AggregationStrategy strategy);

// d v / d e_i is coefficient(i) * identity; this returns the per-input
// coefficients (1, 1/n, or w_i / sum w) used by the backward pass.
std::vector<double> aggregate_coefficients(std::size_t n,
                                           const std::optional<std::vector<double>>& weights,
                                           AggregationStrategy strategy);

}  // namespace graphnli
