#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "graphnli/aggregate.hpp"
#include "graphnli/encoder.hpp"
#include "graphnli/tree.hpp"
#include "graphnli/walk.hpp"

namespace graphnli {

// Feature construction from the PoI embedding u and the aggregated context
// embedding v. Feature dims: 2d, 3d, 3d, 4d.
enum class ConcatMode { UV, UVmul, UVdiff, UVdiffMul };

const char* concat_mode_name(ConcatMode mode);
ConcatMode concat_mode_from_name(const std::string& name);
std::size_t concat_dim(ConcatMode mode, std::size_t dim);

// Blocks in order: u, v, then |u-v| and/or u*v as the mode asks.
Vec concat_features(const Vec& u, const Vec& v, ConcatMode mode);

// Accumulates d loss / d u and d loss / d v from the feature gradient.
// |u-v| uses subgradient 0 at ties.
void concat_backward(const Vec& u, const Vec& v, ConcatMode mode, const Vec& grad_features,
                     Vec& grad_u, Vec& grad_v);

// Class order everywhere: index 0 = Support, index 1 = Attack.
inline constexpr std::size_t kSupportClass = 0;
inline constexpr std::size_t kAttackClass = 1;

struct AdamState {
  Matrix m_proj_w, v_proj_w;
  Vec m_proj_b, v_proj_b;
  Matrix m_head_w, v_head_w;
  Vec m_head_b, v_head_b;
  std::int64_t step = 0;

  bool operator==(const AdamState&) const = default;
};

// Everything the trainer updates: the classifier head plus the shared
// projection, with the optimizer moments that belong to them.
struct PolarityHeadParams {
  Matrix head_weight;  // 2 x feature_dim
  Vec head_bias;       // 2
  ProjectionParams projection;
  AdamState adam_state;

  // Projection per its init rule; head starts at zero so untrained logits
  // are symmetric.
  static PolarityHeadParams init(std::size_t dim, ConcatMode mode, std::uint64_t seed);

  bool operator==(const PolarityHeadParams&) const = default;
};

struct TrainConfig {
  std::uint64_t epochs = 4;
  std::uint64_t batch_size = 16;
  double learning_rate = 1e-3;  // the paper-scale 2e-5 remains expressible
  double warmup_fraction = 0.10;
  std::uint64_t seed = 0;
  WalkSpec walk = WalkSpec::root_seeking();
  AggregationStrategy aggregation = AggregationStrategy::WeightedAverage;
  ConcatMode concat = ConcatMode::UVdiff;
  EncoderSpec encoder;
  // Ablation toggle: drop returns to the PoI from the aggregation input.
  bool include_poi_revisits = true;

  void validate() const;
};

// One classifiable reply edge: the PoI node and its gold edge polarity.
struct TrainEdge {
  const DiscussionTree* tree = nullptr;
  std::string poi;
  Polarity label = Polarity::Support;
};

// All non-root nodes, trees in input order, node ids sorted within a tree.
std::vector<TrainEdge> collect_edges(std::span<const DiscussionTree> trees);

// Softmax probabilities (p_support, p_attack) from a feature vector.
std::array<double, 2> head_forward(const Vec& features, const PolarityHeadParams& params);

// Intermediate values of one edge's forward pass, exposed for gradient
// oracles and debugging.
struct EdgeTrace {
  Vec u_raw, u;
  std::vector<Vec> neighbor_raw, neighbor;
  std::vector<double> coefficients;
  std::optional<std::vector<double>> walk_weights;
  Vec v;
  Vec features;
  std::array<double, 2> probs{};
};

// Walk -> encode -> project -> aggregate -> concat -> softmax. Training
// passes the epoch so BiasedRandom resamples per epoch; evaluation leaves it
// empty for the fixed eval stream.
EdgeTrace edge_forward(const DiscussionTree& tree, const std::string& poi,
                       const PolarityHeadParams& params, const TrainConfig& config,
                       const Encoder& encoder, std::optional<std::uint64_t> epoch = std::nullopt);

struct LossGrads {
  double loss = 0.0;  // mean cross-entropy over the batch
  Matrix grad_head_w;
  Vec grad_head_b;
  Matrix grad_proj_w;
  Vec grad_proj_b;
};

// Mean cross-entropy and analytic gradients for every trainable tensor,
// propagated end-to-end through head, concatenation, aggregation and the
// projection tanh.
LossGrads loss_and_grads(std::span<const TrainEdge> batch, const PolarityHeadParams& params,
                         const TrainConfig& config, const Encoder& encoder,
                         std::optional<std::uint64_t> epoch = std::nullopt);

struct TrainResult {
  PolarityHeadParams params;
  std::vector<double> epoch_loss;  // mean loss per epoch
};

// W = ceil(warmup_fraction * total_steps).
std::uint64_t warmup_step_count(double warmup_fraction, std::uint64_t total_steps);

// lr(step) = lr * min(1, step / W) with a 1-based step; W = 0 disables warmup.
double warmup_learning_rate(double learning_rate, std::uint64_t step, std::uint64_t warmup_steps);

// Shuffled minibatch training with Adam (beta1 0.9, beta2 0.999, eps 1e-8)
// and a linear warmup: lr(step) = lr * min(1, step / ceil(warmup_fraction *
// total_steps)), constant afterwards. Bit-reproducible given seeds.
TrainResult train(std::span<const DiscussionTree> train_trees, const TrainConfig& config);
TrainResult train(std::span<const DiscussionTree> train_trees, const TrainConfig& config,
                  const Encoder& encoder);

// Argmax polarity; an exact tie goes to Support.
Polarity predict(const DiscussionTree& tree, const std::string& poi,
                 const PolarityHeadParams& params, const TrainConfig& config,
                 const Encoder& encoder);

}  // namespace graphnli
