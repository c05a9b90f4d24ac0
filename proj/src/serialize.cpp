#include "graphnli/serialize.hpp"

#include <fstream>

namespace graphnli {

namespace {

template <typename T>
void maybe(const ordered_json& j, const char* key, T& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}

ordered_json matrix_to_json(const Matrix& m) {
  ordered_json j;
  j["rows"] = m.rows;
  j["cols"] = m.cols;
  j["data"] = m.data;
  return j;
}

Matrix matrix_from_json(const ordered_json& j) {
  Matrix m(j.at("rows").get<std::size_t>(), j.at("cols").get<std::size_t>());
  m.data = j.at("data").get<Vec>();
  if (m.data.size() != m.rows * m.cols)
    throw Error(Errc::MalformedJson, "matrix data does not match its shape");
  return m;
}

}  // namespace

ordered_json walk_spec_to_json(const WalkSpec& spec) {
  ordered_json j;
  j["kind"] = walk_kind_name(spec.kind);
  j["max_len"] = spec.max_len;
  if (spec.kind == WalkKind::RootSeeking) j["discount"] = spec.discount;
  if (spec.kind == WalkKind::BiasedRandom) {
    j["parent_prob"] = spec.parent_prob;
    j["seed"] = spec.seed;
  }
  return j;
}

WalkSpec walk_spec_from_json(const ordered_json& j) {
  WalkSpec spec;
  if (j.contains("kind")) spec.kind = walk_kind_from_name(j.at("kind").get<std::string>());
  if (spec.kind == WalkKind::BiasedRandom) spec.max_len = 4;  // per-kind default L
  if (spec.kind == WalkKind::ParentOnly) spec.max_len = 1;
  maybe(j, "max_len", spec.max_len);
  maybe(j, "discount", spec.discount);
  maybe(j, "parent_prob", spec.parent_prob);
  maybe(j, "seed", spec.seed);
  spec.validate();
  return spec;
}

ordered_json encoder_spec_to_json(const EncoderSpec& spec) {
  ordered_json j;
  j["kind"] = encoder_kind_name(spec.kind);
  j["dim"] = spec.dim;
  j["hash_seed"] = spec.hash_seed;
  j["table_path"] = spec.table_path ? ordered_json(*spec.table_path) : ordered_json(nullptr);
  return j;
}

EncoderSpec encoder_spec_from_json(const ordered_json& j) {
  EncoderSpec spec;
  if (j.contains("kind")) spec.kind = encoder_kind_from_name(j.at("kind").get<std::string>());
  maybe(j, "dim", spec.dim);
  maybe(j, "hash_seed", spec.hash_seed);
  if (j.contains("table_path") && !j.at("table_path").is_null())
    spec.table_path = j.at("table_path").get<std::string>();
  spec.validate();
  return spec;
}

ordered_json train_config_to_json(const TrainConfig& config) {
  ordered_json j;
  j["epochs"] = config.epochs;
  j["batch_size"] = config.batch_size;
  j["learning_rate"] = config.learning_rate;
  j["warmup_fraction"] = config.warmup_fraction;
  j["seed"] = config.seed;
  j["walk"] = walk_spec_to_json(config.walk);
  j["aggregation"] = aggregation_name(config.aggregation);
  j["concat"] = concat_mode_name(config.concat);
  j["encoder"] = encoder_spec_to_json(config.encoder);
  j["include_poi_revisits"] = config.include_poi_revisits;
  return j;
}

TrainConfig train_config_from_json(const ordered_json& j) {
  TrainConfig config;
  maybe(j, "epochs", config.epochs);
  maybe(j, "batch_size", config.batch_size);
  maybe(j, "learning_rate", config.learning_rate);
  maybe(j, "warmup_fraction", config.warmup_fraction);
  maybe(j, "seed", config.seed);
  if (j.contains("walk")) config.walk = walk_spec_from_json(j.at("walk"));
  if (j.contains("aggregation"))
    config.aggregation = aggregation_from_name(j.at("aggregation").get<std::string>());
  if (j.contains("concat")) config.concat = concat_mode_from_name(j.at("concat").get<std::string>());
  if (j.contains("encoder")) config.encoder = encoder_spec_from_json(j.at("encoder"));
  maybe(j, "include_poi_revisits", config.include_poi_revisits);
  return config;
}

ordered_json synth_config_to_json(const SynthConfig& config) {
  ordered_json j;
  j["n_debates"] = config.n_debates;
  j["nodes_per_debate"] = config.nodes_per_debate;
  j["branching"] = config.branching;
  j["label_rule"] = label_rule_name(config.label_rule);
  j["support_band"] = {config.support_band_low, config.support_band_high};
  j["vocab_size"] = config.vocab_size;
  j["seed"] = config.seed;
  return j;
}

SynthConfig synth_config_from_json(const ordered_json& j) {
  SynthConfig config;
  maybe(j, "n_debates", config.n_debates);
  maybe(j, "nodes_per_debate", config.nodes_per_debate);
  maybe(j, "branching", config.branching);
  if (j.contains("label_rule"))
    config.label_rule = label_rule_from_name(j.at("label_rule").get<std::string>());
  if (j.contains("support_band")) {
    const auto& band = j.at("support_band");
    if (!band.is_array() || band.size() != 2)
      throw Error(Errc::BadConfig, "support_band must be [low, high]");
    config.support_band_low = band.at(0).get<double>();
    config.support_band_high = band.at(1).get<double>();
  }
  maybe(j, "vocab_size", config.vocab_size);
  maybe(j, "seed", config.seed);
  return config;
}

ordered_json bow_config_to_json(const BowConfig& config) {
  ordered_json j;
  j["l2"] = config.l2;
  j["epochs"] = config.epochs;
  j["learning_rate"] = config.learning_rate;
  j["features"] = bow_features_name(config.features);
  j["seed"] = config.seed;
  return j;
}

BowConfig bow_config_from_json(const ordered_json& j) {
  BowConfig config;
  maybe(j, "l2", config.l2);
  maybe(j, "epochs", config.epochs);
  maybe(j, "learning_rate", config.learning_rate);
  if (j.contains("features"))
    config.features = bow_features_from_name(j.at("features").get<std::string>());
  maybe(j, "seed", config.seed);
  return config;
}

ordered_json mlp_config_to_json(const MlpConfig& config) {
  ordered_json j;
  j["epochs"] = config.epochs;
  j["batch_size"] = config.batch_size;
  j["learning_rate"] = config.learning_rate;
  j["convergence_tol"] = config.convergence_tol;
  j["hidden"] = config.hidden;
  j["seed"] = config.seed;
  j["walk"] = walk_spec_to_json(config.walk);
  j["encoder"] = encoder_spec_to_json(config.encoder);
  return j;
}

MlpConfig mlp_config_from_json(const ordered_json& j) {
  MlpConfig config;
  maybe(j, "epochs", config.epochs);
  maybe(j, "batch_size", config.batch_size);
  maybe(j, "learning_rate", config.learning_rate);
  maybe(j, "convergence_tol", config.convergence_tol);
  maybe(j, "hidden", config.hidden);
  maybe(j, "seed", config.seed);
  if (j.contains("walk")) config.walk = walk_spec_from_json(j.at("walk"));
  if (j.contains("encoder")) config.encoder = encoder_spec_from_json(j.at("encoder"));
  return config;
}

ordered_json checkpoint_to_json(const PolarityHeadParams& params, const TrainConfig& config,
                                const std::string& model_kind) {
  ordered_json j;
  j["model_kind"] = model_kind;
  j["dim"] = params.projection.bias.size();
  j["concat"] = concat_mode_name(config.concat);
  j["projection"] = {{"weight", matrix_to_json(params.projection.weight)},
                     {"bias", params.projection.bias}};
  j["head"] = {{"weight", matrix_to_json(params.head_weight)}, {"bias", params.head_bias}};
  const AdamState& st = params.adam_state;
  j["adam_state"] = {{"step", st.step},
                     {"m_proj_w", matrix_to_json(st.m_proj_w)},
                     {"v_proj_w", matrix_to_json(st.v_proj_w)},
                     {"m_proj_b", st.m_proj_b},
                     {"v_proj_b", st.v_proj_b},
                     {"m_head_w", matrix_to_json(st.m_head_w)},
                     {"v_head_w", matrix_to_json(st.v_head_w)},
                     {"m_head_b", st.m_head_b},
                     {"v_head_b", st.v_head_b}};
  j["config_echo"] = train_config_to_json(config);
  return j;
}

PolarityHeadParams checkpoint_from_json(const ordered_json& j, TrainConfig* config_out) {
  PolarityHeadParams params;
  params.projection.weight = matrix_from_json(j.at("projection").at("weight"));
  params.projection.bias = j.at("projection").at("bias").get<Vec>();
  params.head_weight = matrix_from_json(j.at("head").at("weight"));
  params.head_bias = j.at("head").at("bias").get<Vec>();
  const auto& st = j.at("adam_state");
  params.adam_state.step = st.at("step").get<std::int64_t>();
  params.adam_state.m_proj_w = matrix_from_json(st.at("m_proj_w"));
  params.adam_state.v_proj_w = matrix_from_json(st.at("v_proj_w"));
  params.adam_state.m_proj_b = st.at("m_proj_b").get<Vec>();
  params.adam_state.v_proj_b = st.at("v_proj_b").get<Vec>();
  params.adam_state.m_head_w = matrix_from_json(st.at("m_head_w"));
  params.adam_state.v_head_w = matrix_from_json(st.at("v_head_w"));
  params.adam_state.m_head_b = st.at("m_head_b").get<Vec>();
  params.adam_state.v_head_b = st.at("v_head_b").get<Vec>();
  if (config_out) *config_out = train_config_from_json(j.at("config_echo"));
  return params;
}

ordered_json bow_checkpoint_to_json(const BowModel& model) {
  ordered_json j;
  j["model_kind"] = "bow";
  j["vocabulary"] = model.vocabulary;
  j["weights"] = model.weights;
  j["bias"] = model.bias;
  j["config_echo"] = bow_config_to_json(model.config);
  return j;
}

BowModel bow_checkpoint_from_json(const ordered_json& j) {
  BowModel model;
  model.vocabulary = j.at("vocabulary").get<std::vector<std::string>>();
  for (std::size_t i = 0; i < model.vocabulary.size(); ++i)
    model.vocab_index[model.vocabulary[i]] = i;
  model.weights = j.at("weights").get<Vec>();
  model.bias = j.at("bias").get<double>();
  model.config = bow_config_from_json(j.at("config_echo"));
  return model;
}

ordered_json mlp_checkpoint_to_json(const MlpModel& model) {
  ordered_json j;
  j["model_kind"] = "mlp";
  j["w1"] = matrix_to_json(model.w1);
  j["b1"] = model.b1;
  j["w2"] = matrix_to_json(model.w2);
  j["b2"] = model.b2;
  j["config_echo"] = mlp_config_to_json(model.config);
  return j;
}

MlpModel mlp_checkpoint_from_json(const ordered_json& j) {
  MlpModel model;
  model.w1 = matrix_from_json(j.at("w1"));
  model.b1 = j.at("b1").get<Vec>();
  model.w2 = matrix_from_json(j.at("w2"));
  model.b2 = j.at("b2").get<Vec>();
  model.config = mlp_config_from_json(j.at("config_echo"));
  return model;
}

void write_json_file(const std::string& path, const ordered_json& j) {
  std::ofstream out(path);
  if (!out) throw Error(Errc::IoError, "cannot write " + path);
  out << j.dump(2) << '\n';
}

ordered_json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::IoError, "cannot open " + path);
  try {
    return ordered_json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::MalformedJson, std::string(e.what()) + " in " + path);
  }
}

}  // namespace graphnli
