#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "graphnli/encoder.hpp"
#include "graphnli/model.hpp"
#include "graphnli/walk.hpp"

namespace graphnli {

// ---------------------------------------------------------------------------
// Bag-of-words + logistic regression
// ---------------------------------------------------------------------------

// ParentChild concatenates parent-then-child unigram counts; ChildOnly keeps
// just the child counts (used to show what local text alone can learn).
enum class BowFeatures { ParentChild, ChildOnly };

const char* bow_features_name(BowFeatures f);
BowFeatures bow_features_from_name(const std::string& name);

struct BowConfig {
  double l2 = 1e-4;
  std::uint64_t epochs = 100;
  double learning_rate = 0.1;  // full-batch step size
  BowFeatures features = BowFeatures::ParentChild;
  std::uint64_t seed = 0;
};

struct BowModel {
  std::vector<std::string> vocabulary;  // index order; built from training texts only
  std::map<std::string, std::size_t> vocab_index;
  Vec weights;  // 2|V| for ParentChild (parent block first), |V| for ChildOnly
  double bias = 0.0;
  BowConfig config;
};

struct BowTrainResult {
  BowModel model;
  std::vector<double> loss_trace;  // regularized loss per epoch
};

// Unigram count features; out-of-vocabulary tokens are dropped.
Vec bow_featurize(const BowModel& model, const TrainEdge& edge);

// P(attack) under the model.
double bow_probability(const BowModel& model, const Vec& features);

// Full-batch gradient descent on L2-regularized logistic loss (bias
// unregularized). Deterministic from zero init.
BowTrainResult bow_train(std::span<const TrainEdge> edges, const BowConfig& config);

// Gradient of the regularized loss at the given parameters; exposed for
// finite-difference checks.
void bow_loss_and_grad(const BowModel& model, std::span<const Vec> features,
                       std::span<const double> labels, double* loss, Vec* grad_w, double* grad_b);

Polarity bow_predict(const BowModel& model, const TrainEdge& edge);
double bow_accuracy(const BowModel& model, std::span<const TrainEdge> edges);

// ---------------------------------------------------------------------------
// Frozen-embedding MLP
// ---------------------------------------------------------------------------

struct MlpConfig {
  std::uint64_t epochs = 50;  // or stop earlier once the loss plateaus
  std::uint64_t batch_size = 16;
  double learning_rate = 1e-3;
  double convergence_tol = 1e-5;
  std::size_t hidden = 64;
  std::uint64_t seed = 0;
  WalkSpec walk = WalkSpec::root_seeking();
  EncoderSpec encoder;  // embeddings stay frozen; there is no projection here
};

struct MlpModel {
  Matrix w1;  // hidden x 2*dim
  Vec b1;
  Matrix w2;  // 2 x hidden
  Vec b2;
  MlpConfig config;
};

struct MlpTrainResult {
  MlpModel model;
  std::vector<double> loss_trace;
};

// Input is concat(u, v) of raw encoder outputs, v averaged over the walk
// sample (fixed evaluation-stream walks). Only the two MLP layers train.
MlpTrainResult mlp_train(std::span<const DiscussionTree> trees, const MlpConfig& config);

std::array<double, 2> mlp_forward(const MlpModel& model, const Vec& input);
Vec mlp_input(const MlpModel& model, const Encoder& encoder, const DiscussionTree& tree,
              const std::string& poi);

Polarity mlp_predict(const MlpModel& model, const Encoder& encoder, const DiscussionTree& tree,
                     const std::string& poi);
double mlp_accuracy(const MlpModel& model, std::span<const DiscussionTree> trees);

}  // namespace graphnli
