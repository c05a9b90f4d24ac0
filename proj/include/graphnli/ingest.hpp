#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "graphnli/tree.hpp"

namespace graphnli {

// Debate files are JSON Lines, UTF-8, one debate per line:
//   {"debate_id": "...", "nodes": [{"id": "...", "parent_id": null|"...",
//    "polarity": null|"support"|"attack", "text": "..."}]}
// Polarity strings are exact lowercase; anything else is malformed.

std::vector<DiscussionTree> parse_jsonl(std::istream& input);
std::vector<DiscussionTree> parse_jsonl_file(const std::string& path);

std::string debate_to_jsonl_line(const DiscussionTree& tree);
void serialize_jsonl(const std::vector<DiscussionTree>& debates, std::ostream& out);
void serialize_jsonl_file(const std::vector<DiscussionTree>& debates, const std::string& path);

// Whole-debate split: no debate's edges are ever divided between the sides.
// |train| = round(train_ratio * total); deterministic in seed.
std::pair<std::vector<DiscussionTree>, std::vector<DiscussionTree>> split_debates(
    const std::vector<DiscussionTree>& debates, double train_ratio, std::uint64_t seed);

// Synthetic oracle-labeled debates. Which text pattern decides an edge's
// polarity is pinned by rule so tests can recompute every label from texts.
enum class LabelRule { MarkerOnly, ParentContext, GrandparentContext };

const char* label_rule_name(LabelRule rule);
LabelRule label_rule_from_name(const std::string& name);

// The marker token the rules key on.
inline constexpr const char* kMarkerToken = "negmark";

bool contains_marker(const std::string& text);

// MarkerOnly:         attack iff child carries the marker.
// ParentContext:      attack iff marker presence differs between child and parent.
// GrandparentContext: attack iff marker presence differs between child and
//                     grandparent; a missing grandparent counts as markerless.
Polarity apply_label_rule(LabelRule rule, const std::string& child_text,
                          const std::string& parent_text,
                          const std::optional<std::string>& grandparent_text);

struct SynthConfig {
  std::uint64_t n_debates = 10;
  std::uint64_t nodes_per_debate = 20;
  double branching = 1.5;  // mean children per expanded node
  LabelRule label_rule = LabelRule::MarkerOnly;
  double support_band_low = 0.4;
  double support_band_high = 0.6;
  std::uint64_t vocab_size = 40;
  std::uint64_t seed = 0;
};

// Deterministic in seed; labels follow label_rule exactly; the overall
// support fraction of the batch lands inside the band (up to 100 fresh
// attempts, then BandInfeasible).
std::vector<DiscussionTree> synth_generate(const SynthConfig& config);

}  // namespace graphnli
