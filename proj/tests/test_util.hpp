#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <optional>
#include <string>
#include <vector>

#include "graphnli/rng.hpp"
#include "graphnli/tree.hpp"

namespace graphnli::testing {

inline ArgumentNode make_node(std::string id, std::string text,
                              std::optional<std::string> parent = std::nullopt,
                              std::optional<Polarity> polarity = std::nullopt) {
  return ArgumentNode{std::move(id), std::move(text), std::move(parent), polarity};
}

// Chain a0 <- a1 <- ... <- a{n-1}, a{n-1} is the root; a{k+1} is the parent
// of a{k}. All edges Support unless flipped.
inline DiscussionTree make_chain(std::size_t n, const std::string& debate_id = "chain") {
  std::vector<ArgumentNode> records;
  for (std::size_t k = 0; k < n; ++k) {
    std::string id = "a" + std::to_string(k);
    if (k + 1 < n)
      records.push_back(make_node(id, "text " + id, "a" + std::to_string(k + 1),
                                  k % 2 ? Polarity::Attack : Polarity::Support));
    else
      records.push_back(make_node(id, "text " + id));
  }
  return DiscussionTree::build(records, debate_id);
}

// Star from the paper's random-walk example: a1 replies to root a0 and has
// children a2, a3, a4.
inline DiscussionTree make_star() {
  std::vector<ArgumentNode> records = {
      make_node("a0", "thesis"),
      make_node("a1", "reply one", "a0", Polarity::Support),
      make_node("a2", "reply two", "a1", Polarity::Attack),
      make_node("a3", "reply three", "a1", Polarity::Support),
      make_node("a4", "reply four", "a1", Polarity::Attack),
  };
  return DiscussionTree::build(records, "star");
}

// Random tree over n nodes: node i attaches to a uniformly random earlier
// node, random polarity. Returns the raw records for oracle cross-checks.
inline std::vector<ArgumentNode> random_records(std::size_t n, std::uint64_t seed) {
  SplitMix64 rng(seed);
  std::vector<ArgumentNode> records;
  records.push_back(make_node("n000", "root text"));
  for (std::size_t i = 1; i < n; ++i) {
    char id[8], parent[8];
    std::snprintf(id, sizeof(id), "n%03zu", i);
    std::snprintf(parent, sizeof(parent), "n%03zu", static_cast<std::size_t>(rng.next_below(i)));
    records.push_back(make_node(id, "text " + std::string(id), parent,
                                rng.next_double() < 0.5 ? Polarity::Support : Polarity::Attack));
  }
  return records;
}

inline double rel_err(double a, double b) {
  double scale = std::max({std::fabs(a), std::fabs(b), 1e-10});
  return std::fabs(a - b) / scale;
}

}  // namespace graphnli::testing
