#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "graphnli/error.hpp"

namespace graphnli {

// Attack/support status of a reply edge. Serialized as "support"/"attack",
// lowercase, everywhere.
enum class Polarity { Support, Attack };

const char* polarity_name(Polarity p);
Polarity polarity_from_name(const std::string& name);  // throws MalformedJson

// One post in a debate. The root carries neither parent_id nor edge_polarity;
// every other node carries both.
struct ArgumentNode {
  std::string id;
  std::string text;
  std::optional<std::string> parent_id;
  std::optional<Polarity> edge_polarity;

  bool operator==(const ArgumentNode&) const = default;
};

// A debate as a rooted tree of arguments with signed child->parent edges.
// Immutable once built; safe to share across threads.
class DiscussionTree {
 public:
  // Validates all tree invariants: a single root, resolvable parents, no
  // cycles, connectivity, non-empty texts. Node iteration order is sorted
  // by id.
  static DiscussionTree build(const std::vector<ArgumentNode>& records, std::string debate_id);

  const std::string& debate_id() const { return debate_id_; }
  const std::string& root_id() const { return root_id_; }
  std::size_t node_count() const { return nodes_.size(); }
  std::size_t edge_count() const { return nodes_.size() - 1; }

  bool has_node(const std::string& id) const { return nodes_.count(id) != 0; }
  const ArgumentNode& node(const std::string& id) const;

  // Ids sorted lexicographically.
  std::vector<std::string> node_ids() const;

  std::optional<std::string> parent_of(const std::string& id) const;
  const std::vector<std::string>& children_of(const std::string& id) const;  // sorted
  std::size_t depth_of(const std::string& id) const;                         // root is 0

  const std::map<std::string, ArgumentNode>& nodes() const { return nodes_; }

  bool operator==(const DiscussionTree& other) const {
    return debate_id_ == other.debate_id_ && nodes_ == other.nodes_;
  }

 private:
  DiscussionTree() = default;

  std::string debate_id_;
  std::string root_id_;
  std::map<std::string, ArgumentNode> nodes_;
  std::map<std::string, std::vector<std::string>> children_;
  std::map<std::string, std::size_t> depth_;
};

// Digraph <A, R_att, R_sup> with disjoint attack and support relations.
struct BipolarFramework {
  std::set<std::string> arguments;
  std::set<std::pair<std::string, std::string>> attacks;
  std::set<std::pair<std::string, std::string>> supports;
};

// Every child->parent edge lands in attacks or supports by its polarity.
BipolarFramework to_baf(const DiscussionTree& tree);

// True iff no ordered pair of subset members is an attack.
// Throws UnknownArgument if the subset mentions an id outside the framework.
bool is_conflict_free(const BipolarFramework& baf, const std::set<std::string>& subset);

// (# support edges) / (# edges). Throws NoEdges on a thesis-only tree.
double support_fraction(const DiscussionTree& tree);

}  // namespace graphnli
