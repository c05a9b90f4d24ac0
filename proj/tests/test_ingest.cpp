#include <doctest.h>

#include <set>
#include <sstream>

#include "graphnli/ingest.hpp"
#include "test_util.hpp"

using namespace graphnli;
using namespace graphnli::testing;

TEST_CASE("parse_jsonl reads a single-node debate") {
  std::istringstream in(
      R"({"debate_id":"d1","nodes":[{"id":"r","parent_id":null,"polarity":null,"text":"thesis"}]})"
      "\n");
  std::vector<DiscussionTree> debates = parse_jsonl(in);
  REQUIRE(debates.size() == 1);
  CHECK(debates[0].debate_id() == "d1");
  CHECK(debates[0].node_count() == 1);
  CHECK(debates[0].root_id() == "r");
}

TEST_CASE("parse_jsonl reads three debates with matching ids") {
  std::ostringstream lines;
  for (int i = 1; i <= 3; ++i)
    lines << R"({"debate_id":"d)" << i
          << R"(","nodes":[{"id":"r","parent_id":null,"polarity":null,"text":"t"},)"
          << R"({"id":"a","parent_id":"r","polarity":"attack","text":"no"}]})"
          << '\n';
  std::istringstream in(lines.str());
  std::vector<DiscussionTree> debates = parse_jsonl(in);
  REQUIRE(debates.size() == 3);
  for (int i = 0; i < 3; ++i) CHECK(debates[i].debate_id() == "d" + std::to_string(i + 1));
}

TEST_CASE("polarity spelling is exact lowercase") {
  std::istringstream in(
      R"({"debate_id":"d","nodes":[{"id":"r","parent_id":null,"polarity":null,"text":"t"},)"
      R"({"id":"a","parent_id":"r","polarity":"Support","text":"yes"}]})");
  try {
    parse_jsonl(in);
    FAIL("expected MalformedJson");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::MalformedJson);
    CHECK(e.line() == 1);
  }
}

TEST_CASE("parse errors carry the line number") {
  std::istringstream in(
      R"({"debate_id":"ok","nodes":[{"id":"r","parent_id":null,"polarity":null,"text":"t"}]})"
      "\n"
      R"({"debate_id":"bad","nodes":[{"id":"a","parent_id":"r","polarity":"attack","text":"x"}]})"
      "\n");
  try {
    parse_jsonl(in);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::DanglingParent);
    CHECK(e.line() == 2);
  }
}

TEST_CASE("duplicate debate ids within a file are rejected") {
  std::istringstream in(
      R"({"debate_id":"d","nodes":[{"id":"r","parent_id":null,"polarity":null,"text":"t"}]})"
      "\n"
      R"({"debate_id":"d","nodes":[{"id":"r","parent_id":null,"polarity":null,"text":"t"}]})"
      "\n");
  CHECK_THROWS_AS(parse_jsonl(in), Error);
}

TEST_CASE("serialize then parse is the identity on valid trees") {
  std::vector<DiscussionTree> debates;
  debates.push_back(DiscussionTree::build(random_records(25, 3), "r1"));
  debates.push_back(make_chain(5, "r2"));
  debates.push_back(DiscussionTree::build({make_node("solo", "just a thesis")}, "r3"));

  std::stringstream buffer;
  serialize_jsonl(debates, buffer);
  std::vector<DiscussionTree> reparsed = parse_jsonl(buffer);
  REQUIRE(reparsed.size() == debates.size());
  for (std::size_t i = 0; i < debates.size(); ++i) CHECK(reparsed[i] == debates[i]);
}

TEST_CASE("split_debates is deterministic with the promised sizes") {
  std::vector<DiscussionTree> debates;
  for (int i = 0; i < 10; ++i)
    debates.push_back(make_chain(3, "debate-" + std::to_string(i)));

  auto [train1, test1] = split_debates(debates, 0.8, 7);
  auto [train2, test2] = split_debates(debates, 0.8, 7);
  CHECK(train1.size() == 8);
  CHECK(test1.size() == 2);
  for (std::size_t i = 0; i < train1.size(); ++i)
    CHECK(train1[i].debate_id() == train2[i].debate_id());
  for (std::size_t i = 0; i < test1.size(); ++i)
    CHECK(test1[i].debate_id() == test2[i].debate_id());

  // train and test partition the input
  std::set<std::string> seen;
  for (const auto& t : train1) seen.insert(t.debate_id());
  for (const auto& t : test1) CHECK(seen.insert(t.debate_id()).second);
  CHECK(seen.size() == debates.size());
}

TEST_CASE("different split seeds are each reproducible") {
  std::vector<DiscussionTree> debates;
  for (int i = 0; i < 12; ++i)
    debates.push_back(make_chain(2, "debate-" + std::to_string(i)));
  auto [a1, b1] = split_debates(debates, 0.75, 1);
  auto [a2, b2] = split_debates(debates, 0.75, 2);
  auto [a3, b3] = split_debates(debates, 0.75, 1);
  for (std::size_t i = 0; i < a1.size(); ++i) CHECK(a1[i].debate_id() == a3[i].debate_id());
  bool differs = false;
  for (std::size_t i = 0; i < b1.size(); ++i)
    if (b1[i].debate_id() != b2[i].debate_id()) differs = true;
  CHECK(differs);  // seeds 1 and 2 give different partitions on 12 debates
}

TEST_CASE("the 1560-debate corpus splits into 1248 training debates") {
  CHECK(std::llround(0.8 * 1560.0) == 1248);
  // desk-size stand-in exercising the same rounding path
  std::vector<DiscussionTree> debates;
  for (int i = 0; i < 1560; ++i)
    debates.push_back(DiscussionTree::build({make_node("r", "t")}, "debate-" + std::to_string(i)));
  auto [train, test] = split_debates(debates, 0.8, 0);
  CHECK(train.size() == 1248);
  CHECK(test.size() == 312);
}

TEST_CASE("an empty split side raises TooFewDebates") {
  std::vector<DiscussionTree> debates;
  for (int i = 0; i < 5; ++i)
    debates.push_back(make_chain(2, "debate-" + std::to_string(i)));
  CHECK_THROWS_AS(split_debates(debates, 0.999, 0), Error);
  try {
    split_debates(debates, 0.999, 0);
  } catch (const Error& e) {
    CHECK(e.code() == Errc::TooFewDebates);
  }
}

TEST_CASE("synthetic generation is byte-identical across runs") {
  SynthConfig config;
  config.n_debates = 6;
  config.nodes_per_debate = 15;
  config.seed = 1;

  std::ostringstream run1, run2;
  serialize_jsonl(synth_generate(config), run1);
  serialize_jsonl(synth_generate(config), run2);
  CHECK(run1.str() == run2.str());
  CHECK(!run1.str().empty());
}

TEST_CASE("marker rules recompute from texts with zero mismatches") {
  for (LabelRule rule :
       {LabelRule::MarkerOnly, LabelRule::ParentContext, LabelRule::GrandparentContext}) {
    SynthConfig config;
    config.n_debates = 8;
    config.nodes_per_debate = 18;
    config.label_rule = rule;
    config.support_band_low = 0.35;
    config.support_band_high = 0.75;
    config.seed = 11;

    std::vector<DiscussionTree> debates = synth_generate(config);
    std::size_t checked = 0;
    for (const DiscussionTree& tree : debates) {
      for (const auto& [id, rec] : tree.nodes()) {
        if (!rec.parent_id) continue;
        const ArgumentNode& parent = tree.node(*rec.parent_id);
        std::optional<std::string> grandparent_text;
        if (parent.parent_id) grandparent_text = tree.node(*parent.parent_id).text;
        CHECK(*rec.edge_polarity ==
              apply_label_rule(rule, rec.text, parent.text, grandparent_text));
        ++checked;
      }
    }
    CHECK(checked > 0);
  }
}

TEST_CASE("marker-only label follows the marker by construction") {
  CHECK(apply_label_rule(LabelRule::MarkerOnly, "this negmark here", "anything", std::nullopt) ==
        Polarity::Attack);
  CHECK(apply_label_rule(LabelRule::MarkerOnly, "plain reply", "anything", std::nullopt) ==
        Polarity::Support);
}

TEST_CASE("grandparent rule treats a missing grandparent as markerless") {
  CHECK(apply_label_rule(LabelRule::GrandparentContext, "with negmark", "parent", std::nullopt) ==
        Polarity::Attack);
  CHECK(apply_label_rule(LabelRule::GrandparentContext, "clean", "parent", std::nullopt) ==
        Polarity::Support);
  CHECK(apply_label_rule(LabelRule::GrandparentContext, "clean", "parent",
                         std::optional<std::string>("some negmark there")) == Polarity::Attack);
}

TEST_CASE("generated support fraction lands inside the configured band") {
  SynthConfig config;
  config.n_debates = 20;
  config.nodes_per_debate = 20;
  config.label_rule = LabelRule::ParentContext;
  config.support_band_low = 0.45;
  config.support_band_high = 0.65;
  config.seed = 5;

  std::vector<DiscussionTree> debates = synth_generate(config);
  std::size_t supports = 0, edges = 0;
  for (const DiscussionTree& tree : debates) {
    edges += tree.edge_count();
    for (const auto& [id, rec] : tree.nodes())
      if (rec.edge_polarity == Polarity::Support) ++supports;
  }
  double fraction = static_cast<double>(supports) / static_cast<double>(edges);
  CHECK(fraction >= config.support_band_low);
  CHECK(fraction <= config.support_band_high);
}

TEST_CASE("an impossible band raises BandInfeasible") {
  SynthConfig config;
  config.n_debates = 4;
  config.nodes_per_debate = 12;
  config.label_rule = LabelRule::GrandparentContext;
  config.support_band_low = 0.0;
  config.support_band_high = 0.2;  // two-step disagreement cannot exceed 1/2
  config.seed = 3;
  try {
    synth_generate(config);
    FAIL("expected BandInfeasible");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::BandInfeasible);
  }
}
