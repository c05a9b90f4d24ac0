#include "graphnli/tree.hpp"

#include <algorithm>
#include <deque>

#include "graphnli/text.hpp"

namespace graphnli {

const char* errc_name(Errc code) {
  switch (code) {
    case Errc::NoRoot: return "NoRoot";
    case Errc::MultipleRoots: return "MultipleRoots";
    case Errc::DanglingParent: return "DanglingParent";
    case Errc::CycleDetected: return "CycleDetected";
    case Errc::DuplicateId: return "DuplicateId";
    case Errc::RootHasPolarity: return "RootHasPolarity";
    case Errc::NonRootMissingPolarity: return "NonRootMissingPolarity";
    case Errc::EmptyText: return "EmptyText";
    case Errc::NoEdges: return "NoEdges";
    case Errc::MalformedJson: return "MalformedJson";
    case Errc::TooFewDebates: return "TooFewDebates";
    case Errc::BandInfeasible: return "BandInfeasible";
    case Errc::PoiIsRoot: return "PoiIsRoot";
    case Errc::UnknownNode: return "UnknownNode";
    case Errc::UnknownArgument: return "UnknownArgument";
    case Errc::EmptyAfterTokenize: return "EmptyAfterTokenize";
    case Errc::MissingNode: return "MissingNode";
    case Errc::DimMismatch: return "DimMismatch";
    case Errc::EmptyInput: return "EmptyInput";
    case Errc::MissingWeights: return "MissingWeights";
    case Errc::NonPositiveWeight: return "NonPositiveWeight";
    case Errc::NoTrainingEdges: return "NoTrainingEdges";
    case Errc::EmptyVocabulary: return "EmptyVocabulary";
    case Errc::LengthMismatch: return "LengthMismatch";
    case Errc::IoError: return "IoError";
    case Errc::BadConfig: return "BadConfig";
  }
  return "UnknownError";
}

const char* polarity_name(Polarity p) { return p == Polarity::Support ? "support" : "attack"; }

Polarity polarity_from_name(const std::string& name) {
  if (name == "support") return Polarity::Support;
  if (name == "attack") return Polarity::Attack;
  throw Error(Errc::MalformedJson, "polarity must be \"support\" or \"attack\", got \"" + name + "\"");
}

DiscussionTree DiscussionTree::build(const std::vector<ArgumentNode>& records,
                                     std::string debate_id) {
  if (records.empty()) throw Error(Errc::NoRoot, "debate " + debate_id + " has no nodes");

  DiscussionTree tree;
  tree.debate_id_ = std::move(debate_id);

  for (const ArgumentNode& rec : records) {
    if (rec.parent_id.has_value() != rec.edge_polarity.has_value()) {
      if (rec.parent_id.has_value())
        throw Error(Errc::NonRootMissingPolarity, "node " + rec.id + " has a parent but no polarity");
      throw Error(Errc::RootHasPolarity, "node " + rec.id + " has a polarity but no parent");
    }
    if (trim(rec.text).empty())
      throw Error(Errc::EmptyText, "node " + rec.id + " has whitespace-only text");
    if (!tree.nodes_.emplace(rec.id, rec).second)
      throw Error(Errc::DuplicateId, "node id " + rec.id + " appears twice");
  }

  for (const auto& [id, rec] : tree.nodes_) {
    if (!rec.parent_id) {
      if (!tree.root_id_.empty())
        throw Error(Errc::MultipleRoots, tree.root_id_ + " and " + id + " both lack a parent");
      tree.root_id_ = id;
    } else {
      if (!tree.nodes_.count(*rec.parent_id))
        throw Error(Errc::DanglingParent, "node " + id + " replies to unknown node " + *rec.parent_id);
      tree.children_[*rec.parent_id].push_back(id);
    }
  }
  if (tree.root_id_.empty()) throw Error(Errc::NoRoot, "every node has a parent");

  // children_ values come from sorted map iteration, hence already sorted.
  // BFS from the root assigns depths and proves connectivity; any node left
  // unreached sits on a cycle detached from the root.
  std::deque<std::string> queue{tree.root_id_};
  tree.depth_[tree.root_id_] = 0;
  while (!queue.empty()) {
    std::string cur = queue.front();
    queue.pop_front();
    auto it = tree.children_.find(cur);
    if (it == tree.children_.end()) continue;
    for (const std::string& child : it->second) {
      tree.depth_[child] = tree.depth_[cur] + 1;
      queue.push_back(child);
    }
  }
  if (tree.depth_.size() != tree.nodes_.size()) {
    for (const auto& [id, rec] : tree.nodes_)
      if (!tree.depth_.count(id))
        throw Error(Errc::CycleDetected, "node " + id + " cannot reach the root");
  }
  return tree;
}

const ArgumentNode& DiscussionTree::node(const std::string& id) const {
  auto it = nodes_.find(id);
  if (it == nodes_.end()) throw Error(Errc::UnknownNode, "no node " + id + " in debate " + debate_id_);
  return it->second;
}

std::vector<std::string> DiscussionTree::node_ids() const {
  std::vector<std::string> ids;
  ids.reserve(nodes_.size());
  for (const auto& [id, rec] : nodes_) ids.push_back(id);
  return ids;
}

std::optional<std::string> DiscussionTree::parent_of(const std::string& id) const {
  return node(id).parent_id;
}

const std::vector<std::string>& DiscussionTree::children_of(const std::string& id) const {
  node(id);  // existence check
  static const std::vector<std::string> kNone;
  auto it = children_.find(id);
  return it == children_.end() ? kNone : it->second;
}

std::size_t DiscussionTree::depth_of(const std::string& id) const {
  node(id);
  return depth_.at(id);
}

BipolarFramework to_baf(const DiscussionTree& tree) {
  BipolarFramework baf;
  for (const auto& [id, rec] : tree.nodes()) {
    baf.arguments.insert(id);
    if (!rec.parent_id) continue;
    auto edge = std::make_pair(id, *rec.parent_id);
    if (*rec.edge_polarity == Polarity::Attack)
      baf.attacks.insert(edge);
    else
      baf.supports.insert(edge);
  }
  return baf;
}

bool is_conflict_free(const BipolarFramework& baf, const std::set<std::string>& subset) {
  for (const std::string& id : subset)
    if (!baf.arguments.count(id))
      throw Error(Errc::UnknownArgument, id + " is not an argument of the framework");
  for (const auto& [from, to] : baf.attacks)
    if (subset.count(from) && subset.count(to)) return false;
  return true;
}

double support_fraction(const DiscussionTree& tree) {
  if (tree.edge_count() == 0)
    throw Error(Errc::NoEdges, "debate " + tree.debate_id() + " is thesis-only");
  std::size_t supports = 0;
  for (const auto& [id, rec] : tree.nodes())
    if (rec.edge_polarity && *rec.edge_polarity == Polarity::Support) ++supports;
  return static_cast<double>(supports) / static_cast<double>(tree.edge_count());
}

}  // namespace graphnli
