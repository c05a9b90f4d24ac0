#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "graphnli/tree.hpp"

namespace graphnli {

// Context sampling over the undirected discussion tree, starting from a
// point-of-interest (PoI) node. Walks read structure only, never polarities.
enum class WalkKind { RootSeeking, BiasedRandom, ParentOnly };

const char* walk_kind_name(WalkKind kind);
WalkKind walk_kind_from_name(const std::string& name);

struct WalkSpec {
  WalkKind kind = WalkKind::RootSeeking;
  std::uint64_t max_len = 5;   // L; paper-best 5 for RootSeeking, 4 for BiasedRandom
  double discount = 0.75;      // gamma, RootSeeking only, in (0, 1]
  double parent_prob = 0.75;   // p, BiasedRandom only, in (0.5, 1)
  std::uint64_t seed = 0;      // BiasedRandom only

  static WalkSpec root_seeking(std::uint64_t max_len = 5, double discount = 0.75);
  static WalkSpec biased_random(std::uint64_t max_len = 4, double parent_prob = 0.75,
                                std::uint64_t seed = 0);
  static WalkSpec parent_only();

  void validate() const;  // throws BadConfig
};

// Visited excludes the PoI at position 0 but may contain it again when a
// random walk loops back; revisits are part of the sample.
struct WalkSample {
  std::string poi;
  std::vector<std::string> visited;
  std::optional<std::vector<double>> weights;  // RootSeeking/ParentOnly only
};

// Strict ancestor chain of the PoI, nearest first, truncated at
// min(L, depth(poi)); weights[i] = discount^(i+1), so the parent gets
// discount^1 and the PoI itself conceptually keeps discount^0 = 1 on u.
WalkSample root_seeking_walk(const DiscussionTree& tree, const std::string& poi,
                             const WalkSpec& spec);

// Exactly L undirected steps: from the current node move to its parent with
// probability p, otherwise uniformly to one of its children; the root sends
// all mass down, a leaf sends all mass up. The RNG stream is keyed by
// (seed, [epoch], debate_id, poi) so walks are reproducible and independent.
WalkSample biased_random_walk(const DiscussionTree& tree, const std::string& poi,
                              const WalkSpec& spec,
                              std::optional<std::uint64_t> epoch = std::nullopt);

// The pair-only degenerate walk: just the parent, weight 1.
WalkSample parent_only_walk(const DiscussionTree& tree, const std::string& poi);

// Dispatch on spec.kind.
WalkSample sample_walk(const DiscussionTree& tree, const std::string& poi, const WalkSpec& spec,
                       std::optional<std::uint64_t> epoch = std::nullopt);

}  // namespace graphnli
