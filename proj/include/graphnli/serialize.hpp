#pragma once

#include <nlohmann/json.hpp>

#include "graphnli/baselines.hpp"
#include "graphnli/ingest.hpp"
#include "graphnli/model.hpp"

namespace graphnli {

using ordered_json = nlohmann::ordered_json;

// JSON mirrors of the config types, field for field. from_* functions accept
// missing fields (defaults apply) but reject unknown enum spellings.
ordered_json walk_spec_to_json(const WalkSpec& spec);
WalkSpec walk_spec_from_json(const ordered_json& j);

ordered_json encoder_spec_to_json(const EncoderSpec& spec);
EncoderSpec encoder_spec_from_json(const ordered_json& j);

ordered_json train_config_to_json(const TrainConfig& config);
TrainConfig train_config_from_json(const ordered_json& j);

ordered_json synth_config_to_json(const SynthConfig& config);
SynthConfig synth_config_from_json(const ordered_json& j);

ordered_json bow_config_to_json(const BowConfig& config);
BowConfig bow_config_from_json(const ordered_json& j);

ordered_json mlp_config_to_json(const MlpConfig& config);
MlpConfig mlp_config_from_json(const ordered_json& j);

// Checkpoint envelope shared by all model kinds:
//   {"model_kind": ..., "dim": ..., "concat": ..., "projection": {...},
//    "head": {...}, "adam_state": {...}, "config_echo": {...}}
// Floats survive the round trip exactly.
ordered_json checkpoint_to_json(const PolarityHeadParams& params, const TrainConfig& config,
                                const std::string& model_kind = "graphnli");
PolarityHeadParams checkpoint_from_json(const ordered_json& j, TrainConfig* config_out = nullptr);

ordered_json bow_checkpoint_to_json(const BowModel& model);
BowModel bow_checkpoint_from_json(const ordered_json& j);

ordered_json mlp_checkpoint_to_json(const MlpModel& model);
MlpModel mlp_checkpoint_from_json(const ordered_json& j);

void write_json_file(const std::string& path, const ordered_json& j);
ordered_json read_json_file(const std::string& path);

}  // namespace graphnli
