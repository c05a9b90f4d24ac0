#include "graphnli/walk.hpp"

#include "graphnli/rng.hpp"

namespace graphnli {

const char* walk_kind_name(WalkKind kind) {
  switch (kind) {
    case WalkKind::RootSeeking: return "root_seeking";
    case WalkKind::BiasedRandom: return "biased_random";
    case WalkKind::ParentOnly: return "parent_only";
  }
  return "?";
}

WalkKind walk_kind_from_name(const std::string& name) {
  if (name == "root_seeking") return WalkKind::RootSeeking;
  if (name == "biased_random") return WalkKind::BiasedRandom;
  if (name == "parent_only") return WalkKind::ParentOnly;
  throw Error(Errc::BadConfig, "unknown walk kind \"" + name + "\"");
}

WalkSpec WalkSpec::root_seeking(std::uint64_t max_len, double discount) {
  WalkSpec spec;
  spec.kind = WalkKind::RootSeeking;
  spec.max_len = max_len;
  spec.discount = discount;
  spec.validate();
  return spec;
}

WalkSpec WalkSpec::biased_random(std::uint64_t max_len, double parent_prob, std::uint64_t seed) {
  WalkSpec spec;
  spec.kind = WalkKind::BiasedRandom;
  spec.max_len = max_len;
  spec.parent_prob = parent_prob;
  spec.seed = seed;
  spec.validate();
  return spec;
}

WalkSpec WalkSpec::parent_only() {
  WalkSpec spec;
  spec.kind = WalkKind::ParentOnly;
  spec.max_len = 1;
  return spec;
}

void WalkSpec::validate() const {
  if (max_len == 0) throw Error(Errc::BadConfig, "walk max_len must be positive");
  if (kind == WalkKind::RootSeeking && !(discount > 0.0 && discount <= 1.0))
    throw Error(Errc::BadConfig, "discount must be in (0, 1]");
  if (kind == WalkKind::BiasedRandom && !(parent_prob > 0.5 && parent_prob < 1.0))
    throw Error(Errc::BadConfig, "parent_prob must be in (0.5, 1)");
}

namespace {

void require_non_root_poi(const DiscussionTree& tree, const std::string& poi) {
  if (!tree.has_node(poi))
    throw Error(Errc::UnknownNode, "no node " + poi + " in debate " + tree.debate_id());
  if (poi == tree.root_id())
    throw Error(Errc::PoiIsRoot, poi + " is the thesis; it has no reply edge to classify");
}

}  // namespace

WalkSample root_seeking_walk(const DiscussionTree& tree, const std::string& poi,
                             const WalkSpec& spec) {
  require_non_root_poi(tree, poi);

  WalkSample sample;
  sample.poi = poi;
  sample.weights.emplace();

  std::string current = poi;
  double weight = 1.0;
  for (std::uint64_t step = 0; step < spec.max_len; ++step) {
    auto parent = tree.parent_of(current);
    if (!parent) break;  // reached the root on the previous step
    weight *= spec.discount;
    sample.visited.push_back(*parent);
    sample.weights->push_back(weight);
    current = *parent;
  }
  return sample;
}

WalkSample biased_random_walk(const DiscussionTree& tree, const std::string& poi,
                              const WalkSpec& spec, std::optional<std::uint64_t> epoch) {
  require_non_root_poi(tree, poi);

  StreamKey key(spec.seed);
  if (epoch) key.mix(*epoch);
  key.mix(tree.debate_id()).mix(poi);
  SplitMix64 rng = key.stream();

  WalkSample sample;
  sample.poi = poi;
  std::string current = poi;
  for (std::uint64_t step = 0; step < spec.max_len; ++step) {
    auto parent = tree.parent_of(current);
    const auto& children = tree.children_of(current);
    std::string next;
    if (!parent) {
      next = children[rng.next_below(children.size())];
    } else if (children.empty()) {
      next = *parent;
    } else if (rng.next_double() < spec.parent_prob) {
      next = *parent;
    } else {
      next = children[rng.next_below(children.size())];
    }
    sample.visited.push_back(next);
    current = next;
  }
  return sample;
}

WalkSample parent_only_walk(const DiscussionTree& tree, const std::string& poi) {
  require_non_root_poi(tree, poi);
  WalkSample sample;
  sample.poi = poi;
  sample.visited.push_back(*tree.parent_of(poi));
  sample.weights = std::vector<double>{1.0};
  return sample;
}

WalkSample sample_walk(const DiscussionTree& tree, const std::string& poi, const WalkSpec& spec,
                       std::optional<std::uint64_t> epoch) {
  switch (spec.kind) {
    case WalkKind::RootSeeking: return root_seeking_walk(tree, poi, spec);
    case WalkKind::BiasedRandom: return biased_random_walk(tree, poi, spec, epoch);
    case WalkKind::ParentOnly: return parent_only_walk(tree, poi);
  }
  throw Error(Errc::BadConfig, "unhandled walk kind");
}

}  // namespace graphnli
