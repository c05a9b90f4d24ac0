#include <iostream>
#include <optional>

#include <CLI11.hpp>

#include "graphnli/experiment.hpp"
#include "graphnli/serialize.hpp"

using namespace graphnli;

namespace {

void emit(const ordered_json& j, const std::string& out_path) {
  if (out_path.empty())
    std::cout << j.dump(2) << '\n';
  else
    write_json_file(out_path, j);
}

ExperimentConfig load_experiment_config(const std::string& config_path,
                                        std::optional<std::uint64_t> seed_override) {
  if (config_path.empty()) throw Error(Errc::BadConfig, "--config is required");
  ExperimentConfig config = experiment_config_from_json(read_json_file(config_path));
  if (seed_override) {
    config.train.seed = *seed_override;
    config.train.walk.seed = *seed_override;
    config.bow.seed = *seed_override;
    config.mlp.seed = *seed_override;
    if (config.data.synth) config.data.synth->seed = *seed_override;
  }
  return config;
}

int run(int argc, char** argv) {
  CLI::App app{"Polarity prediction for threaded debates with graph-walk context"};
  app.require_subcommand(1);

  std::string config_path, out_path;
  std::optional<std::uint64_t> seed_override;
  app.add_option("--config", config_path, "JSON config file")->expected(1);
  app.add_option("--out", out_path, "output path (stdout when omitted)");
  app.add_option("--seed", seed_override, "override the stochastic seed from the config");

  // ingest: validate a debate file and summarize it
  auto* ingest = app.add_subcommand("ingest", "parse and validate a JSONL debate file");
  std::string input_path;
  ingest->add_option("--input", input_path, "JSONL debate file")->required();

  // synth: generate oracle-labeled synthetic debates
  auto* synth = app.add_subcommand("synth", "generate synthetic debates as JSONL");

  // walk-dump: print one walk sample
  auto* walk_dump = app.add_subcommand("walk-dump", "print a walk sample as JSON");
  std::string wd_input, wd_debate, wd_poi, wd_kind = "root_seeking";
  std::uint64_t wd_len = 0, wd_seed = 0;
  double wd_discount = 0.75, wd_parent_prob = 0.75;
  walk_dump->add_option("--input", wd_input, "JSONL debate file")->required();
  walk_dump->add_option("--debate", wd_debate, "debate id")->required();
  walk_dump->add_option("--poi", wd_poi, "point-of-interest node id")->required();
  walk_dump->add_option("--kind", wd_kind, "root_seeking | biased_random | parent_only");
  walk_dump->add_option("--max-len", wd_len, "walk length L (defaults per kind)");
  walk_dump->add_option("--discount", wd_discount, "gamma for root_seeking");
  walk_dump->add_option("--parent-prob", wd_parent_prob, "p for biased_random");
  walk_dump->add_option("--walk-seed", wd_seed, "seed for biased_random");

  auto* train_cmd = app.add_subcommand("train", "train one model and write a checkpoint");
  auto* evaluate = app.add_subcommand("evaluate", "run a multi-seed experiment");
  std::string checkpoint_path;
  evaluate->add_option("--checkpoint", checkpoint_path,
                       "score an existing checkpoint on the test split instead of retraining");
  auto* ablate = app.add_subcommand("ablate", "run the walk/aggregation/concat ablation suite");

  CLI11_PARSE(app, argc, argv);

  if (ingest->parsed()) {
    std::vector<DiscussionTree> debates = parse_jsonl_file(input_path);
    std::size_t nodes = 0, edges = 0, supports = 0;
    for (const DiscussionTree& tree : debates) {
      nodes += tree.node_count();
      edges += tree.edge_count();
      for (const auto& [id, rec] : tree.nodes())
        if (rec.edge_polarity == Polarity::Support) ++supports;
    }
    ordered_json summary;
    summary["debates"] = debates.size();
    summary["nodes"] = nodes;
    summary["edges"] = edges;
    summary["support_fraction"] =
        edges ? static_cast<double>(supports) / static_cast<double>(edges) : 0.0;
    if (!out_path.empty()) serialize_jsonl_file(debates, out_path);
    std::cout << summary.dump(2) << '\n';
    return 0;
  }

  if (synth->parsed()) {
    SynthConfig config;
    if (!config_path.empty()) {
      ordered_json j = read_json_file(config_path);
      // accept either a bare SynthConfig or a full experiment config
      config = j.contains("data") && j.at("data").contains("synth")
                   ? synth_config_from_json(j.at("data").at("synth"))
                   : synth_config_from_json(j);
    }
    if (seed_override) config.seed = *seed_override;
    std::vector<DiscussionTree> debates = synth_generate(config);
    if (out_path.empty())
      serialize_jsonl(debates, std::cout);
    else
      serialize_jsonl_file(debates, out_path);
    return 0;
  }

  if (walk_dump->parsed()) {
    WalkSpec spec;
    spec.kind = walk_kind_from_name(wd_kind);
    spec.max_len = wd_len ? wd_len : (spec.kind == WalkKind::BiasedRandom ? 4 : 5);
    if (spec.kind == WalkKind::ParentOnly) spec.max_len = 1;
    spec.discount = wd_discount;
    spec.parent_prob = wd_parent_prob;
    spec.seed = seed_override.value_or(wd_seed);
    spec.validate();

    std::vector<DiscussionTree> debates = parse_jsonl_file(wd_input);
    const DiscussionTree* tree = nullptr;
    for (const DiscussionTree& t : debates)
      if (t.debate_id() == wd_debate) tree = &t;
    if (!tree) throw Error(Errc::UnknownNode, "no debate " + wd_debate + " in " + wd_input);

    WalkSample sample = sample_walk(*tree, wd_poi, spec);
    ordered_json j;
    j["debate_id"] = tree->debate_id();
    j["poi"] = sample.poi;
    j["visited"] = sample.visited;
    if (sample.weights) j["weights"] = *sample.weights;
    j["spec"] = walk_spec_to_json(spec);
    emit(j, out_path);
    return 0;
  }

  if (train_cmd->parsed()) {
    ExperimentConfig config = load_experiment_config(config_path, seed_override);
    std::vector<DiscussionTree> debates = config.data.load();
    auto [train_trees, test_trees] = split_debates(debates, config.train_ratio, config.split_seed);

    ordered_json checkpoint;
    switch (config.model) {
      case ModelKind::GraphNli:
      case ModelKind::PairOnly: {
        TrainConfig tc = config.train;
        if (config.model == ModelKind::PairOnly) {
          tc.walk = WalkSpec::parent_only();
          tc.aggregation = AggregationStrategy::Average;
        }
        TrainResult result = train(train_trees, tc);
        checkpoint = checkpoint_to_json(result.params, tc, model_kind_name(config.model));
        checkpoint["loss_trace"] = result.epoch_loss;
        break;
      }
      case ModelKind::Bow: {
        std::vector<TrainEdge> edges = collect_edges(train_trees);
        BowTrainResult result = bow_train(edges, config.bow);
        checkpoint = bow_checkpoint_to_json(result.model);
        checkpoint["loss_trace"] = result.loss_trace;
        break;
      }
      case ModelKind::Mlp: {
        MlpConfig mc = config.mlp;
        mc.encoder = config.train.encoder;
        MlpTrainResult result = mlp_train(train_trees, mc);
        checkpoint = mlp_checkpoint_to_json(result.model);
        checkpoint["loss_trace"] = result.loss_trace;
        break;
      }
    }
    if (out_path.empty()) throw Error(Errc::BadConfig, "train needs --out for the checkpoint");
    write_json_file(out_path, checkpoint);
    std::cout << "wrote " << out_path << '\n';
    return 0;
  }

  if (evaluate->parsed()) {
    ExperimentConfig config = load_experiment_config(config_path, seed_override);
    if (!checkpoint_path.empty()) {
      // score a saved model on the config's test split
      std::vector<DiscussionTree> debates = config.data.load();
      auto [train_trees, test_trees] =
          split_debates(debates, config.train_ratio, config.split_seed);
      std::vector<TrainEdge> test_edges = collect_edges(test_trees);

      ordered_json cj = read_json_file(checkpoint_path);
      std::string kind = cj.at("model_kind").get<std::string>();
      double acc = 0.0;
      if (kind == "bow") {
        BowModel model = bow_checkpoint_from_json(cj);
        acc = bow_accuracy(model, test_edges);
      } else if (kind == "mlp") {
        MlpModel model = mlp_checkpoint_from_json(cj);
        acc = mlp_accuracy(model, test_trees);
      } else {
        TrainConfig tc;
        PolarityHeadParams params = checkpoint_from_json(cj, &tc);
        Encoder encoder(tc.encoder);
        std::size_t hits = 0;
        for (const TrainEdge& edge : test_edges)
          if (predict(*edge.tree, edge.poi, params, tc, encoder) == edge.label) ++hits;
        acc = static_cast<double>(hits) / static_cast<double>(test_edges.size());
      }
      ordered_json j;
      j["checkpoint"] = checkpoint_path;
      j["model_kind"] = kind;
      j["test_edges"] = test_edges.size();
      j["accuracy"] = acc;
      emit(j, out_path);
      return 0;
    }
    EvalReport report = run_experiment(config);
    emit(eval_report_to_json(report), out_path);
    return 0;
  }

  if (ablate->parsed()) {
    ExperimentConfig config = load_experiment_config(config_path, seed_override);
    AblationTable table = ablation_suite(config);
    std::cout << ablation_to_text(table);
    if (!out_path.empty()) write_json_file(out_path, ablation_to_json(table));
    return 0;
  }

  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const Error& e) {
    ordered_json j;
    j["error"] = errc_name(e.code());
    j["message"] = e.what();
    std::cerr << j.dump() << '\n';
    return 1;
  } catch (const std::exception& e) {
    ordered_json j;
    j["error"] = "Unhandled";
    j["message"] = e.what();
    std::cerr << j.dump() << '\n';
    return 1;
  }
}
