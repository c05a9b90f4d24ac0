#include <doctest.h>

#include "graphnli/aggregate.hpp"
#include "graphnli/rng.hpp"
#include "test_util.hpp"

using namespace graphnli;
using namespace graphnli::testing;

namespace {

// Naive reimplementation used as the oracle: per entry, apply the defining
// formula directly - sum(e), sum(e)/n, or sum(w e)/sum(w).
Vec oracle_aggregate(const std::vector<Vec>& es, const std::vector<double>* ws,
                     AggregationStrategy strategy) {
  std::size_t dim = es.front().size();
  Vec out(dim);
  for (std::size_t j = 0; j < dim; ++j) {
    double acc = 0.0;
    if (strategy == AggregationStrategy::WeightedAverage) {
      double total = 0.0;
      for (std::size_t i = 0; i < es.size(); ++i) {
        acc += (*ws)[i] * es[i][j];
        total += (*ws)[i];
      }
      acc /= total;
    } else {
      for (std::size_t i = 0; i < es.size(); ++i) acc += es[i][j];
      if (strategy == AggregationStrategy::Average) acc /= double(es.size());
    }
    out[j] = acc;
  }
  return out;
}

double ulp_distance(double a, double b) {
  if (a == b) return 0.0;
  double ulp = std::fabs(std::nexttoward(a, b) - a);
  return std::fabs(a - b) / ulp;
}

}  // namespace

TEST_CASE("identical inputs: averages return the input, sum scales it") {
  Vec e = {0.5, -1.0, 2.0};
  std::vector<Vec> es(4, e);
  std::vector<double> ws = {0.9, 0.7, 0.2, 0.4};
  CHECK(aggregate(es, std::nullopt, AggregationStrategy::Average) == e);
  Vec wavg = aggregate(es, ws, AggregationStrategy::WeightedAverage);
  for (std::size_t j = 0; j < e.size(); ++j)
    CHECK(wavg[j] == doctest::Approx(e[j]).epsilon(1e-15));
  CHECK(aggregate(es, std::nullopt, AggregationStrategy::Sum) == Vec{2.0, -4.0, 8.0});
}

TEST_CASE("gamma-discounted weighted average on basis vectors") {
  // weights 0.75 and 0.5625 normalize to 0.75/1.3125 and 0.5625/1.3125
  std::vector<Vec> es = {{1.0, 0.0}, {0.0, 1.0}};
  std::vector<double> ws = {0.75, 0.5625};
  Vec v = aggregate(es, ws, AggregationStrategy::WeightedAverage);
  CHECK(v[0] == doctest::Approx(0.75 / 1.3125).epsilon(1e-15));
  CHECK(v[1] == doctest::Approx(0.5625 / 1.3125).epsilon(1e-15));
  CHECK(v[0] == doctest::Approx(0.571428571428571).epsilon(1e-12));
  CHECK(v[1] == doctest::Approx(0.428571428571429).epsilon(1e-12));
}

TEST_CASE("a single neighbor passes through every strategy") {
  std::vector<Vec> es = {{1.25, -3.5, 0.75}};
  std::vector<double> ws = {0.6};
  CHECK(aggregate(es, std::nullopt, AggregationStrategy::Sum) == es[0]);
  CHECK(aggregate(es, std::nullopt, AggregationStrategy::Average) == es[0]);
  CHECK(aggregate(es, ws, AggregationStrategy::WeightedAverage) == es[0]);
}

TEST_CASE("aggregation error paths") {
  CHECK_THROWS_AS(aggregate({}, std::nullopt, AggregationStrategy::Sum), Error);
  std::vector<Vec> bad_dims = {{1.0, 2.0}, {1.0}};
  CHECK_THROWS_AS(aggregate(bad_dims, std::nullopt, AggregationStrategy::Sum), Error);
  std::vector<Vec> es = {{1.0}, {2.0}};
  CHECK_THROWS_AS(aggregate(es, std::nullopt, AggregationStrategy::WeightedAverage), Error);
  std::vector<double> zero_w = {1.0, 0.0};
  try {
    aggregate(es, zero_w, AggregationStrategy::WeightedAverage);
    FAIL("expected NonPositiveWeight");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::NonPositiveWeight);
  }
}

TEST_CASE("aggregate matches the naive oracle on random fixtures") {
  SplitMix64 rng(31);
  for (int trial = 0; trial < 1000; ++trial) {
    std::size_t n = 1 + rng.next_below(8);
    std::size_t dim = 1 + rng.next_below(6);
    std::vector<Vec> es(n, Vec(dim));
    std::vector<double> ws(n);
    for (auto& e : es)
      for (double& x : e) x = rng.uniform(-2.0, 2.0);
    for (double& w : ws) w = rng.uniform(0.05, 3.0);

    for (auto strategy : {AggregationStrategy::Sum, AggregationStrategy::Average,
                          AggregationStrategy::WeightedAverage}) {
      auto weights = strategy == AggregationStrategy::WeightedAverage
                         ? std::optional<std::vector<double>>(ws)
                         : std::nullopt;
      Vec got = aggregate(es, weights, strategy);
      Vec want = oracle_aggregate(es, &ws, strategy);
      for (std::size_t j = 0; j < got.size(); ++j) CHECK(ulp_distance(got[j], want[j]) <= 2.0);
    }
  }
}

TEST_CASE("weighted average is exactly invariant to power-of-two weight scaling") {
  SplitMix64 rng(8);
  std::vector<Vec> es(5, Vec(4));
  std::vector<double> ws = {0.75, 0.5625, 0.421875, 0.31640625, 0.2373046875};
  for (auto& e : es)
    for (double& x : e) x = rng.uniform(-1.0, 1.0);

  Vec base = aggregate(es, ws, AggregationStrategy::WeightedAverage);
  for (double scale : {0.125, 0.5, 2.0, 1024.0, 0x1.0p-20}) {
    std::vector<double> scaled = ws;
    for (double& w : scaled) w *= scale;
    CHECK(aggregate(es, scaled, AggregationStrategy::WeightedAverage) == base);
  }
}

TEST_CASE("weighted average with arbitrary positive scale stays within a few ulp") {
  std::vector<Vec> es = {{0.3, 1.7}, {-0.9, 0.4}, {2.1, -0.6}};
  std::vector<double> ws = {1.3, 0.7, 0.9};
  Vec base = aggregate(es, ws, AggregationStrategy::WeightedAverage);
  for (double scale : {3.0, 0.1, 7.77}) {
    std::vector<double> scaled = ws;
    for (double& w : scaled) w *= scale;
    Vec got = aggregate(es, scaled, AggregationStrategy::WeightedAverage);
    for (std::size_t j = 0; j < got.size(); ++j) CHECK(ulp_distance(got[j], base[j]) <= 4.0);
  }
}

TEST_CASE("equal weights reduce the weighted average to the plain average") {
  SplitMix64 rng(12);
  for (int trial = 0; trial < 50; ++trial) {
    std::size_t n = 2 + rng.next_below(7);
    std::vector<Vec> es(n, Vec(3));
    for (auto& e : es)
      for (double& x : e) x = rng.uniform(0.1, 2.0);
    std::vector<double> ws(n, 0.5);  // dyadic equal weights
    Vec avg = aggregate(es, std::nullopt, AggregationStrategy::Average);
    Vec wavg = aggregate(es, ws, AggregationStrategy::WeightedAverage);
    for (std::size_t j = 0; j < avg.size(); ++j) CHECK(ulp_distance(avg[j], wavg[j]) <= 1.0);
  }
}

TEST_CASE("sum and average are permutation invariant") {
  std::vector<Vec> es = {{1.0, 2.0}, {3.0, -1.0}, {0.5, 0.25}, {-2.0, 4.0}};
  std::vector<double> ws = {0.9, 0.4, 0.8, 0.3};
  std::vector<std::size_t> perm = {2, 0, 3, 1};
  std::vector<Vec> pes;
  std::vector<double> pws;
  for (std::size_t i : perm) {
    pes.push_back(es[i]);
    pws.push_back(ws[i]);
  }
  for (auto strategy : {AggregationStrategy::Sum, AggregationStrategy::Average}) {
    Vec a = aggregate(es, std::nullopt, strategy);
    Vec b = aggregate(pes, std::nullopt, strategy);
    for (std::size_t j = 0; j < a.size(); ++j) CHECK(a[j] == doctest::Approx(b[j]).epsilon(1e-15));
  }
  Vec a = aggregate(es, ws, AggregationStrategy::WeightedAverage);
  Vec b = aggregate(pes, pws, AggregationStrategy::WeightedAverage);
  for (std::size_t j = 0; j < a.size(); ++j) CHECK(a[j] == doctest::Approx(b[j]).epsilon(1e-15));
}

TEST_CASE("aggregation partial derivatives pass a finite-difference check") {
  const double step = 1e-5;
  std::vector<Vec> es = {{0.4, -0.7}, {1.2, 0.3}, {-0.5, 0.9}};
  std::vector<double> ws = {0.75, 0.5625, 0.421875};

  for (auto strategy : {AggregationStrategy::Sum, AggregationStrategy::Average,
                        AggregationStrategy::WeightedAverage}) {
    auto weights = strategy == AggregationStrategy::WeightedAverage
                       ? std::optional<std::vector<double>>(ws)
                       : std::nullopt;
    std::vector<double> coeffs = aggregate_coefficients(es.size(), weights, strategy);
    for (std::size_t i = 0; i < es.size(); ++i) {
      for (std::size_t j = 0; j < es[i].size(); ++j) {
        std::vector<Vec> plus = es, minus = es;
        plus[i][j] += step;
        minus[i][j] -= step;
        double fd = (aggregate(plus, weights, strategy)[j] -
                     aggregate(minus, weights, strategy)[j]) /
                    (2.0 * step);
        CHECK(rel_err(fd, coeffs[i]) < 1e-6);
      }
    }
  }
}
