#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "graphnli/baselines.hpp"
#include "graphnli/ingest.hpp"
#include "graphnli/model.hpp"
#include "graphnli/serialize.hpp"

namespace graphnli {

enum class ModelKind { GraphNli, Bow, Mlp, PairOnly };

const char* model_kind_name(ModelKind kind);
ModelKind model_kind_from_name(const std::string& name);

// Either a JSONL debate file or a synthetic generator config.
struct DataSource {
  std::optional<std::string> file;
  std::optional<SynthConfig> synth;

  std::vector<DiscussionTree> load() const;
};

struct ExperimentConfig {
  DataSource data;
  double train_ratio = 0.8;
  std::uint64_t split_seed = 0;
  ModelKind model = ModelKind::GraphNli;
  TrainConfig train;
  BowConfig bow;  // consulted when model == Bow
  MlpConfig mlp;  // consulted when model == Mlp
  std::uint64_t n_seeds = 5;
  std::string out_path;

  void validate() const;
};

ordered_json experiment_config_to_json(const ExperimentConfig& config);
ExperimentConfig experiment_config_from_json(const ordered_json& j);

struct EvalReport {
  std::vector<double> per_seed_accuracy;
  double mean_accuracy = 0.0;
  ordered_json config_echo;
  std::size_t train_edges = 0;
  std::size_t test_edges = 0;
};

ordered_json eval_report_to_json(const EvalReport& report);
EvalReport eval_report_from_json(const ordered_json& j);

// (# matches) / n. Throws LengthMismatch / EmptyInput.
double accuracy(std::span<const Polarity> predictions, std::span<const Polarity> labels);

// One fixed debate-level split; run i trains with every seed shifted by i
// and scores the test edges. Reproducible end to end.
EvalReport run_experiment(const ExperimentConfig& config);

// Walk/aggregation cells in the row order of the paper's model table, each
// crossed with the concatenation variants in the row order of its ablation
// table.
struct AblationCell {
  WalkKind walk;
  AggregationStrategy aggregation;
  ConcatMode concat;
  std::optional<EvalReport> report;
  std::optional<std::string> error;  // a failing cell never aborts the suite
};

struct AblationTable {
  std::vector<AblationCell> cells;
  ordered_json config_echo;
};

AblationTable ablation_suite(const ExperimentConfig& base);

ordered_json ablation_to_json(const AblationTable& table);
AblationTable ablation_from_json(const ordered_json& j);

// Fixed-width human-readable rendering of the same table.
std::string ablation_to_text(const AblationTable& table);

// Published accuracy percentages reported for this architecture on the full
// Kialo corpus; attached to reports as annotation only, never asserted
// (surrogate encoders cannot reproduce them).
ordered_json reference_accuracy_annotation();

}  // namespace graphnli
