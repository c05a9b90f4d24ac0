#include "graphnli/ingest.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "graphnli/rng.hpp"
#include "graphnli/text.hpp"

namespace graphnli {

using ordered_json = nlohmann::ordered_json;

namespace {

ArgumentNode node_from_json(const nlohmann::json& j, std::size_t line) {
  if (!j.is_object()) throw Error(Errc::MalformedJson, "node entry is not an object", line);
  for (const char* key : {"id", "text"})
    if (!j.contains(key) || !j.at(key).is_string())
      throw Error(Errc::MalformedJson, std::string("node is missing string field \"") + key + "\"",
                  line);
  if (!j.contains("parent_id") || !j.contains("polarity"))
    throw Error(Errc::MalformedJson, "node needs parent_id and polarity (null for the root)", line);

  ArgumentNode node;
  node.id = j.at("id").get<std::string>();
  node.text = j.at("text").get<std::string>();

  const auto& parent = j.at("parent_id");
  if (parent.is_string())
    node.parent_id = parent.get<std::string>();
  else if (!parent.is_null())
    throw Error(Errc::MalformedJson, "parent_id must be a string or null", line);

  const auto& pol = j.at("polarity");
  if (pol.is_string()) {
    try {
      node.edge_polarity = polarity_from_name(pol.get<std::string>());
    } catch (const Error& e) {
      throw Error(Errc::MalformedJson, e.what(), line);
    }
  } else if (!pol.is_null()) {
    throw Error(Errc::MalformedJson, "polarity must be a string or null", line);
  }
  return node;
}

}  // namespace

std::vector<DiscussionTree> parse_jsonl(std::istream& input) {
  std::vector<DiscussionTree> debates;
  std::set<std::string> seen_ids;
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(input, raw)) {
    ++line_no;
    if (trim(raw).empty()) continue;

    nlohmann::json j;
    try {
      j = nlohmann::json::parse(raw);
    } catch (const nlohmann::json::exception& e) {
      throw Error(Errc::MalformedJson, e.what(), line_no);
    }
    if (!j.is_object() || !j.contains("debate_id") || !j.at("debate_id").is_string() ||
        !j.contains("nodes") || !j.at("nodes").is_array())
      throw Error(Errc::MalformedJson, "debate needs a debate_id string and a nodes array", line_no);

    std::string debate_id = j.at("debate_id").get<std::string>();
    if (!seen_ids.insert(debate_id).second)
      throw Error(Errc::DuplicateId, "debate_id " + debate_id + " repeats within the file", line_no);

    std::vector<ArgumentNode> records;
    records.reserve(j.at("nodes").size());
    for (const auto& nj : j.at("nodes")) records.push_back(node_from_json(nj, line_no));

    try {
      debates.push_back(DiscussionTree::build(records, std::move(debate_id)));
    } catch (const Error& e) {
      throw Error(e.code(), e.what(), line_no);
    }
  }
  return debates;
}

std::vector<DiscussionTree> parse_jsonl_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::IoError, "cannot open " + path);
  return parse_jsonl(in);
}

std::string debate_to_jsonl_line(const DiscussionTree& tree) {
  ordered_json nodes = ordered_json::array();
  for (const auto& [id, rec] : tree.nodes()) {
    ordered_json nj;
    nj["id"] = rec.id;
    nj["parent_id"] = rec.parent_id ? ordered_json(*rec.parent_id) : ordered_json(nullptr);
    nj["polarity"] =
        rec.edge_polarity ? ordered_json(polarity_name(*rec.edge_polarity)) : ordered_json(nullptr);
    nj["text"] = rec.text;
    nodes.push_back(std::move(nj));
  }
  ordered_json j;
  j["debate_id"] = tree.debate_id();
  j["nodes"] = std::move(nodes);
  return j.dump();
}

void serialize_jsonl(const std::vector<DiscussionTree>& debates, std::ostream& out) {
  for (const DiscussionTree& tree : debates) out << debate_to_jsonl_line(tree) << '\n';
}

void serialize_jsonl_file(const std::vector<DiscussionTree>& debates, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error(Errc::IoError, "cannot write " + path);
  serialize_jsonl(debates, out);
}

std::pair<std::vector<DiscussionTree>, std::vector<DiscussionTree>> split_debates(
    const std::vector<DiscussionTree>& debates, double train_ratio, std::uint64_t seed) {
  if (!(train_ratio > 0.0 && train_ratio < 1.0))
    throw Error(Errc::BadConfig, "train_ratio must be in (0, 1)");

  auto n_total = debates.size();
  auto n_train = static_cast<std::size_t>(
      std::llround(train_ratio * static_cast<double>(n_total)));
  if (n_train == 0 || n_train >= n_total)
    throw Error(Errc::TooFewDebates, "split of " + std::to_string(n_total) +
                                         " debates at ratio " + std::to_string(train_ratio) +
                                         " leaves one side empty");

  std::vector<std::size_t> order(n_total);
  for (std::size_t i = 0; i < n_total; ++i) order[i] = i;
  SplitMix64 rng(StreamKey(seed).mix("debate-split").value());
  shuffle(order, rng);

  auto by_debate_id = [&](std::size_t a, std::size_t b) {
    return debates[a].debate_id() < debates[b].debate_id();
  };
  std::sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(n_train), by_debate_id);
  std::sort(order.begin() + static_cast<std::ptrdiff_t>(n_train), order.end(), by_debate_id);

  std::pair<std::vector<DiscussionTree>, std::vector<DiscussionTree>> result;
  for (std::size_t i = 0; i < n_total; ++i)
    (i < n_train ? result.first : result.second).push_back(debates[order[i]]);
  return result;
}

const char* label_rule_name(LabelRule rule) {
  switch (rule) {
    case LabelRule::MarkerOnly: return "marker_only";
    case LabelRule::ParentContext: return "parent_context";
    case LabelRule::GrandparentContext: return "grandparent_context";
  }
  return "?";
}

LabelRule label_rule_from_name(const std::string& name) {
  if (name == "marker_only") return LabelRule::MarkerOnly;
  if (name == "parent_context") return LabelRule::ParentContext;
  if (name == "grandparent_context") return LabelRule::GrandparentContext;
  throw Error(Errc::BadConfig, "unknown label rule \"" + name + "\"");
}

bool contains_marker(const std::string& text) {
  for (const std::string& tok : tokenize(text))
    if (tok == kMarkerToken) return true;
  return false;
}

Polarity apply_label_rule(LabelRule rule, const std::string& child_text,
                          const std::string& parent_text,
                          const std::optional<std::string>& grandparent_text) {
  bool child = contains_marker(child_text);
  switch (rule) {
    case LabelRule::MarkerOnly:
      return child ? Polarity::Attack : Polarity::Support;
    case LabelRule::ParentContext:
      return child != contains_marker(parent_text) ? Polarity::Attack : Polarity::Support;
    case LabelRule::GrandparentContext: {
      bool grand = grandparent_text ? contains_marker(*grandparent_text) : false;
      return child != grand ? Polarity::Attack : Polarity::Support;
    }
  }
  throw Error(Errc::BadConfig, "unhandled label rule");
}

namespace {

std::string synth_node_id(std::uint64_t index) {
  char buf[24];
  std::snprintf(buf, sizeof(buf), "n%04llu", static_cast<unsigned long long>(index));
  return buf;
}

std::string synth_text(SplitMix64& rng, const SynthConfig& cfg, bool marked) {
  std::uint64_t n_tokens = 4 + rng.next_below(4);
  std::vector<std::string> tokens;
  tokens.reserve(n_tokens + 1);
  for (std::uint64_t t = 0; t < n_tokens; ++t)
    tokens.push_back("w" + std::to_string(rng.next_below(cfg.vocab_size)));
  if (marked)
    tokens.insert(tokens.begin() + static_cast<std::ptrdiff_t>(rng.next_below(n_tokens + 1)),
                  kMarkerToken);
  std::string text;
  for (const std::string& tok : tokens) {
    if (!text.empty()) text.push_back(' ');
    text += tok;
  }
  return text;
}

// Marker placement targets the band midpoint in expectation. For the context
// rules markers follow a child-copies-parent Markov chain with stickiness
// rho, which keeps marginals at 1/2 while making ancestors informative:
//   ParentContext      support = P(child marker == parent marker) = rho
//   GrandparentContext support = 1 - 2*rho*(1-rho)
// GrandparentContext cannot average below 0.5 support (two-step disagreement
// peaks at 1/2), so bands entirely below that come back BandInfeasible.
double marker_stickiness(LabelRule rule, double target_support) {
  if (rule == LabelRule::ParentContext) return target_support;
  double disc = 2.0 * target_support - 1.0;
  if (disc < 0.0) return 0.5;
  return 0.5 * (1.0 + std::sqrt(disc));
}

std::vector<DiscussionTree> synth_attempt(const SynthConfig& cfg, std::uint64_t attempt) {
  double target = 0.5 * (cfg.support_band_low + cfg.support_band_high);
  double marker_rate = 1.0 - target;                              // MarkerOnly
  double rho = marker_stickiness(cfg.label_rule, target);        // context rules

  std::vector<DiscussionTree> debates;
  debates.reserve(cfg.n_debates);
  for (std::uint64_t d = 0; d < cfg.n_debates; ++d) {
    SplitMix64 rng(StreamKey(cfg.seed).mix("synth").mix(attempt).mix(d).stream().next());

    // Tree shape: expand a FIFO frontier, sampling each node's child count
    // around `branching`; the last frontier node is forced to extend the
    // tree while budget remains.
    std::uint64_t n = cfg.nodes_per_debate;
    std::vector<std::optional<std::uint64_t>> parent(n);
    std::deque<std::uint64_t> frontier{0};
    std::uint64_t produced = 1;
    while (produced < n) {
      std::uint64_t cur;
      if (frontier.empty()) {
        cur = produced - 1;
      } else {
        cur = frontier.front();
        frontier.pop_front();
      }
      auto whole = static_cast<std::uint64_t>(cfg.branching);
      double frac = cfg.branching - static_cast<double>(whole);
      std::uint64_t k = whole + (rng.next_double() < frac ? 1 : 0);
      if (frontier.empty() && k == 0) k = 1;
      k = std::min<std::uint64_t>(k, n - produced);
      for (std::uint64_t c = 0; c < k; ++c) {
        parent[produced] = cur;
        frontier.push_back(produced);
        ++produced;
      }
    }

    // Markers, then texts, then labels recomputed from the texts themselves.
    std::vector<bool> marked(n);
    for (std::uint64_t i = 0; i < n; ++i) {
      if (cfg.label_rule == LabelRule::MarkerOnly) {
        marked[i] = rng.next_double() < marker_rate;
      } else if (!parent[i]) {
        marked[i] = rng.next_double() < 0.5;
      } else {
        bool copy = rng.next_double() < rho;
        marked[i] = copy ? marked[*parent[i]] : !marked[*parent[i]];
      }
    }

    std::vector<ArgumentNode> records(n);
    for (std::uint64_t i = 0; i < n; ++i) {
      records[i].id = synth_node_id(i);
      records[i].text = synth_text(rng, cfg, marked[i]);
    }
    for (std::uint64_t i = 1; i < n; ++i) {
      std::uint64_t p = *parent[i];
      records[i].parent_id = records[p].id;
      std::optional<std::string> grand;
      if (parent[p]) grand = records[*parent[p]].text;
      records[i].edge_polarity =
          apply_label_rule(cfg.label_rule, records[i].text, records[p].text, grand);
    }

    debates.push_back(
        DiscussionTree::build(records, "synth-" + std::to_string(cfg.seed) + "-" + std::to_string(d)));
  }
  return debates;
}

}  // namespace

std::vector<DiscussionTree> synth_generate(const SynthConfig& cfg) {
  if (cfg.nodes_per_debate < 2) throw Error(Errc::BadConfig, "nodes_per_debate must be >= 2");
  if (cfg.n_debates == 0) throw Error(Errc::BadConfig, "n_debates must be positive");
  if (!(cfg.support_band_low >= 0.0 && cfg.support_band_low <= cfg.support_band_high &&
        cfg.support_band_high <= 1.0))
    throw Error(Errc::BadConfig, "support band must satisfy 0 <= low <= high <= 1");
  if (cfg.vocab_size == 0) throw Error(Errc::BadConfig, "vocab_size must be positive");

  for (std::uint64_t attempt = 0; attempt < 100; ++attempt) {
    std::vector<DiscussionTree> debates = synth_attempt(cfg, attempt);
    std::size_t supports = 0, edges = 0;
    for (const DiscussionTree& tree : debates) {
      edges += tree.edge_count();
      for (const auto& [id, rec] : tree.nodes())
        if (rec.edge_polarity && *rec.edge_polarity == Polarity::Support) ++supports;
    }
    double fraction = static_cast<double>(supports) / static_cast<double>(edges);
    if (fraction >= cfg.support_band_low && fraction <= cfg.support_band_high) return debates;
  }
  throw Error(Errc::BandInfeasible,
              "could not land the support fraction in [" + std::to_string(cfg.support_band_low) +
                  ", " + std::to_string(cfg.support_band_high) + "] within 100 attempts");
}

}  // namespace graphnli
