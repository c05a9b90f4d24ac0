#include "graphnli/aggregate.hpp"

namespace graphnli {

const char* aggregation_name(AggregationStrategy strategy) {
  switch (strategy) {
    case AggregationStrategy::Sum: return "sum";
    case AggregationStrategy::Average: return "average";
    case AggregationStrategy::WeightedAverage: return "weighted_average";
  }
  return "?";
}

AggregationStrategy aggregation_from_name(const std::string& name) {
  if (name == "sum") return AggregationStrategy::Sum;
  if (name == "average") return AggregationStrategy::Average;
  if (name == "weighted_average") return AggregationStrategy::WeightedAverage;
  throw Error(Errc::BadConfig, "unknown aggregation \"" + name + "\"");
}

std::vector<double> aggregate_coefficients(std::size_t n,
                                           const std::optional<std::vector<double>>& weights,
                                           AggregationStrategy strategy) {
  if (n == 0) throw Error(Errc::EmptyInput, "nothing to aggregate");
  switch (strategy) {
    case AggregationStrategy::Sum:
      return std::vector<double>(n, 1.0);
    case AggregationStrategy::Average:
      return std::vector<double>(n, 1.0 / static_cast<double>(n));
    case AggregationStrategy::WeightedAverage: {
      if (!weights) throw Error(Errc::MissingWeights, "weighted average needs walk weights");
      if (weights->size() != n)
        throw Error(Errc::LengthMismatch, "weights do not align with embeddings");
      double total = 0.0;
      for (double w : *weights) {
        if (!(w > 0.0)) throw Error(Errc::NonPositiveWeight, "weights must be positive");
        total += w;
      }
      std::vector<double> coeffs(n);
      for (std::size_t i = 0; i < n; ++i) coeffs[i] = (*weights)[i] / total;
      return coeffs;
    }
  }
  throw Error(Errc::BadConfig, "unhandled aggregation strategy");
}

Vec aggregate(const std::vector<Vec>& embeddings, const std::optional<std::vector<double>>& weights,
              AggregationStrategy strategy) {
  if (embeddings.empty()) throw Error(Errc::EmptyInput, "nothing to aggregate");
  std::size_t dim = embeddings.front().size();
  for (const Vec& e : embeddings)
    if (e.size() != dim) throw Error(Errc::DimMismatch, "mixed dims in aggregation input");

  // validates weights for WeightedAverage
  (void)aggregate_coefficients(embeddings.size(), weights, strategy);

  // accumulate first, divide once: v = sum, sum/n, or sum(w e)/sum(w)
  Vec out(dim, 0.0);
  if (strategy == AggregationStrategy::WeightedAverage) {
    for (std::size_t i = 0; i < embeddings.size(); ++i)
      axpy(out, embeddings[i], (*weights)[i]);
    double total = 0.0;
    for (double w : *weights) total += w;
    for (double& x : out) x /= total;
  } else {
    for (const Vec& e : embeddings) axpy(out, e, 1.0);
    if (strategy == AggregationStrategy::Average)
      for (double& x : out) x /= static_cast<double>(embeddings.size());
  }
  return out;
}

}  // namespace graphnli
