#include "graphnli/model.hpp"

#include <algorithm>
#include <cmath>

#include "graphnli/optim.hpp"
#include "graphnli/rng.hpp"

namespace graphnli {

const char* concat_mode_name(ConcatMode mode) {
  switch (mode) {
    case ConcatMode::UV: return "uv";
    case ConcatMode::UVmul: return "uv_mul";
    case ConcatMode::UVdiff: return "uv_diff";
    case ConcatMode::UVdiffMul: return "uv_diff_mul";
  }
  return "?";
}

ConcatMode concat_mode_from_name(const std::string& name) {
  if (name == "uv") return ConcatMode::UV;
  if (name == "uv_mul") return ConcatMode::UVmul;
  if (name == "uv_diff") return ConcatMode::UVdiff;
  if (name == "uv_diff_mul") return ConcatMode::UVdiffMul;
  throw Error(Errc::BadConfig, "unknown concat mode \"" + name + "\"");
}

std::size_t concat_dim(ConcatMode mode, std::size_t dim) {
  switch (mode) {
    case ConcatMode::UV: return 2 * dim;
    case ConcatMode::UVmul:
    case ConcatMode::UVdiff: return 3 * dim;
    case ConcatMode::UVdiffMul: return 4 * dim;
  }
  return 0;
}

Vec concat_features(const Vec& u, const Vec& v, ConcatMode mode) {
  if (u.size() != v.size()) throw Error(Errc::DimMismatch, "u and v dims differ");
  std::size_t dim = u.size();
  Vec features;
  features.reserve(concat_dim(mode, dim));
  features.insert(features.end(), u.begin(), u.end());
  features.insert(features.end(), v.begin(), v.end());
  if (mode == ConcatMode::UVdiff || mode == ConcatMode::UVdiffMul)
    for (std::size_t i = 0; i < dim; ++i) features.push_back(std::fabs(u[i] - v[i]));
  if (mode == ConcatMode::UVmul || mode == ConcatMode::UVdiffMul)
    for (std::size_t i = 0; i < dim; ++i) features.push_back(u[i] * v[i]);
  return features;
}

void concat_backward(const Vec& u, const Vec& v, ConcatMode mode, const Vec& grad_features,
                     Vec& grad_u, Vec& grad_v) {
  std::size_t dim = u.size();
  if (grad_features.size() != concat_dim(mode, dim))
    throw Error(Errc::DimMismatch, "feature gradient has the wrong length");
  for (std::size_t i = 0; i < dim; ++i) {
    grad_u[i] += grad_features[i];
    grad_v[i] += grad_features[dim + i];
  }
  std::size_t offset = 2 * dim;
  if (mode == ConcatMode::UVdiff || mode == ConcatMode::UVdiffMul) {
    for (std::size_t i = 0; i < dim; ++i) {
      double g = grad_features[offset + i];
      double diff = u[i] - v[i];
      double sign = diff > 0.0 ? 1.0 : (diff < 0.0 ? -1.0 : 0.0);
      grad_u[i] += g * sign;
      grad_v[i] -= g * sign;
    }
    offset += dim;
  }
  if (mode == ConcatMode::UVmul || mode == ConcatMode::UVdiffMul) {
    for (std::size_t i = 0; i < dim; ++i) {
      double g = grad_features[offset + i];
      grad_u[i] += g * v[i];
      grad_v[i] += g * u[i];
    }
  }
}

PolarityHeadParams PolarityHeadParams::init(std::size_t dim, ConcatMode mode, std::uint64_t seed) {
  PolarityHeadParams params;
  std::size_t feat = concat_dim(mode, dim);
  params.head_weight = Matrix(2, feat);
  params.head_bias = Vec(2, 0.0);
  params.projection = ProjectionParams::init(dim, seed);
  params.adam_state.m_proj_w = Matrix(dim, dim);
  params.adam_state.v_proj_w = Matrix(dim, dim);
  params.adam_state.m_proj_b = Vec(dim, 0.0);
  params.adam_state.v_proj_b = Vec(dim, 0.0);
  params.adam_state.m_head_w = Matrix(2, feat);
  params.adam_state.v_head_w = Matrix(2, feat);
  params.adam_state.m_head_b = Vec(2, 0.0);
  params.adam_state.v_head_b = Vec(2, 0.0);
  return params;
}

void TrainConfig::validate() const {
  if (epochs == 0) throw Error(Errc::BadConfig, "epochs must be positive");
  if (batch_size == 0) throw Error(Errc::BadConfig, "batch_size must be positive");
  if (!(learning_rate > 0.0)) throw Error(Errc::BadConfig, "learning_rate must be positive");
  if (!(warmup_fraction >= 0.0 && warmup_fraction < 1.0))
    throw Error(Errc::BadConfig, "warmup_fraction must be in [0, 1)");
  walk.validate();
  encoder.validate();
  if (aggregation == AggregationStrategy::WeightedAverage && walk.kind == WalkKind::BiasedRandom)
    throw Error(Errc::MissingWeights,
                "the biased random walk is unweighted; pair it with sum or average");
}

std::vector<TrainEdge> collect_edges(std::span<const DiscussionTree> trees) {
  std::vector<TrainEdge> edges;
  for (const DiscussionTree& tree : trees)
    for (const auto& [id, rec] : tree.nodes())
      if (rec.parent_id) edges.push_back({&tree, id, *rec.edge_polarity});
  return edges;
}

std::array<double, 2> head_forward(const Vec& features, const PolarityHeadParams& params) {
  if (features.size() != params.head_weight.cols)
    throw Error(Errc::DimMismatch, "feature vector does not match the head");
  Vec logits = params.head_weight.matvec(features);
  logits[0] += params.head_bias[0];
  logits[1] += params.head_bias[1];
  double peak = std::max(logits[0], logits[1]);
  double e0 = std::exp(logits[0] - peak);
  double e1 = std::exp(logits[1] - peak);
  double total = e0 + e1;
  return {e0 / total, e1 / total};
}

EdgeTrace edge_forward(const DiscussionTree& tree, const std::string& poi,
                       const PolarityHeadParams& params, const TrainConfig& config,
                       const Encoder& encoder, std::optional<std::uint64_t> epoch) {
  EdgeTrace trace;
  trace.u_raw = encoder.embed(tree, poi);
  trace.u = project(trace.u_raw, params.projection);

  WalkSample sample = sample_walk(tree, poi, config.walk, epoch);
  std::vector<std::string> context;
  std::vector<double> weights;
  for (std::size_t i = 0; i < sample.visited.size(); ++i) {
    if (!config.include_poi_revisits && sample.visited[i] == poi) continue;
    context.push_back(sample.visited[i]);
    if (sample.weights) weights.push_back((*sample.weights)[i]);
  }
  if (sample.weights) trace.walk_weights = weights;

  for (const std::string& id : context) {
    trace.neighbor_raw.push_back(encoder.embed(tree, id));
    trace.neighbor.push_back(project(trace.neighbor_raw.back(), params.projection));
  }
  trace.coefficients =
      aggregate_coefficients(trace.neighbor.size(), trace.walk_weights, config.aggregation);
  trace.v = aggregate(trace.neighbor, trace.walk_weights, config.aggregation);
  trace.features = concat_features(trace.u, trace.v, config.concat);
  trace.probs = head_forward(trace.features, params);
  return trace;
}

LossGrads loss_and_grads(std::span<const TrainEdge> batch, const PolarityHeadParams& params,
                         const TrainConfig& config, const Encoder& encoder,
                         std::optional<std::uint64_t> epoch) {
  if (batch.empty()) throw Error(Errc::EmptyInput, "empty batch");
  std::size_t dim = encoder.dim();

  LossGrads out;
  out.grad_head_w = Matrix(params.head_weight.rows, params.head_weight.cols);
  out.grad_head_b = Vec(2, 0.0);
  out.grad_proj_w = Matrix(dim, dim);
  out.grad_proj_b = Vec(dim, 0.0);

  for (const TrainEdge& edge : batch) {
    EdgeTrace trace = edge_forward(*edge.tree, edge.poi, params, config, encoder, epoch);
    std::size_t truth = edge.label == Polarity::Support ? kSupportClass : kAttackClass;
    out.loss += -std::log(trace.probs[truth]);

    // softmax + cross-entropy: d logits = p - onehot
    Vec dlogits = {trace.probs[0], trace.probs[1]};
    dlogits[truth] -= 1.0;
    out.grad_head_w.add_outer(dlogits, trace.features);
    axpy(out.grad_head_b, dlogits, 1.0);

    Vec dfeat = params.head_weight.matvec_transposed(dlogits);
    Vec du(dim, 0.0), dv(dim, 0.0);
    concat_backward(trace.u, trace.v, config.concat, dfeat, du, dv);

    project_backward(trace.u_raw, trace.u, du, params.projection, out.grad_proj_w,
                     out.grad_proj_b);
    for (std::size_t i = 0; i < trace.neighbor.size(); ++i) {
      Vec dnbr(dim);
      for (std::size_t j = 0; j < dim; ++j) dnbr[j] = trace.coefficients[i] * dv[j];
      project_backward(trace.neighbor_raw[i], trace.neighbor[i], dnbr, params.projection,
                       out.grad_proj_w, out.grad_proj_b);
    }
  }

  double inv = 1.0 / static_cast<double>(batch.size());
  out.loss *= inv;
  for (double& g : out.grad_head_w.data) g *= inv;
  for (double& g : out.grad_head_b) g *= inv;
  for (double& g : out.grad_proj_w.data) g *= inv;
  for (double& g : out.grad_proj_b) g *= inv;
  return out;
}

namespace {

void adam_step(PolarityHeadParams& params, const LossGrads& grads, double lr) {
  AdamState& st = params.adam_state;
  ++st.step;
  adam_tensor(params.projection.weight.data, st.m_proj_w.data, st.v_proj_w.data,
              grads.grad_proj_w.data, lr, st.step);
  adam_tensor(params.projection.bias, st.m_proj_b, st.v_proj_b, grads.grad_proj_b, lr, st.step);
  adam_tensor(params.head_weight.data, st.m_head_w.data, st.v_head_w.data, grads.grad_head_w.data,
              lr, st.step);
  adam_tensor(params.head_bias, st.m_head_b, st.v_head_b, grads.grad_head_b, lr, st.step);
}

}  // namespace

std::uint64_t warmup_step_count(double warmup_fraction, std::uint64_t total_steps) {
  return static_cast<std::uint64_t>(
      std::ceil(warmup_fraction * static_cast<double>(total_steps)));
}

double warmup_learning_rate(double learning_rate, std::uint64_t step, std::uint64_t warmup_steps) {
  if (warmup_steps == 0 || step >= warmup_steps) return learning_rate;
  return learning_rate * static_cast<double>(step) / static_cast<double>(warmup_steps);
}

TrainResult train(std::span<const DiscussionTree> train_trees, const TrainConfig& config) {
  Encoder encoder(config.encoder);
  return train(train_trees, config, encoder);
}

TrainResult train(std::span<const DiscussionTree> train_trees, const TrainConfig& config,
                  const Encoder& encoder) {
  config.validate();
  std::vector<TrainEdge> edges = collect_edges(train_trees);
  if (edges.empty()) throw Error(Errc::NoTrainingEdges, "no non-root nodes to train on");

  std::uint64_t batches_per_epoch = (edges.size() + config.batch_size - 1) / config.batch_size;
  std::uint64_t total_steps = config.epochs * batches_per_epoch;
  std::uint64_t warmup_steps = warmup_step_count(config.warmup_fraction, total_steps);

  TrainResult result;
  result.params = PolarityHeadParams::init(encoder.dim(), config.concat, config.seed);

  std::vector<std::size_t> order(edges.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;

  for (std::uint64_t epoch = 0; epoch < config.epochs; ++epoch) {
    SplitMix64 rng(StreamKey(config.seed).mix("epoch-shuffle").mix(epoch).stream().next());
    shuffle(order, rng);

    double epoch_loss = 0.0;
    for (std::size_t start = 0; start < edges.size(); start += config.batch_size) {
      std::size_t count = std::min<std::size_t>(config.batch_size, edges.size() - start);
      std::vector<TrainEdge> batch;
      batch.reserve(count);
      for (std::size_t i = 0; i < count; ++i) batch.push_back(edges[order[start + i]]);

      LossGrads grads = loss_and_grads(batch, result.params, config, encoder, epoch);
      epoch_loss += grads.loss * static_cast<double>(count);

      auto next_step = static_cast<std::uint64_t>(result.params.adam_state.step + 1);
      adam_step(result.params, grads,
                warmup_learning_rate(config.learning_rate, next_step, warmup_steps));
    }
    result.epoch_loss.push_back(epoch_loss / static_cast<double>(edges.size()));
  }
  return result;
}

Polarity predict(const DiscussionTree& tree, const std::string& poi,
                 const PolarityHeadParams& params, const TrainConfig& config,
                 const Encoder& encoder) {
  EdgeTrace trace = edge_forward(tree, poi, params, config, encoder);
  return trace.probs[kSupportClass] >= trace.probs[kAttackClass] ? Polarity::Support
                                                                 : Polarity::Attack;
}

}  // namespace graphnli
