#include "graphnli/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "graphnli/optim.hpp"
#include "graphnli/rng.hpp"
#include "graphnli/text.hpp"

namespace graphnli {

const char* bow_features_name(BowFeatures f) {
  return f == BowFeatures::ParentChild ? "parent_child" : "child_only";
}

BowFeatures bow_features_from_name(const std::string& name) {
  if (name == "parent_child") return BowFeatures::ParentChild;
  if (name == "child_only") return BowFeatures::ChildOnly;
  throw Error(Errc::BadConfig, "unknown bow feature mode \"" + name + "\"");
}

namespace {

const std::string& parent_text(const TrainEdge& edge) {
  return edge.tree->node(*edge.tree->parent_of(edge.poi)).text;
}

double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

}  // namespace

Vec bow_featurize(const BowModel& model, const TrainEdge& edge) {
  std::size_t vsize = model.vocabulary.size();
  bool pair = model.config.features == BowFeatures::ParentChild;
  Vec x(pair ? 2 * vsize : vsize, 0.0);
  if (pair) {
    for (const std::string& tok : tokenize(parent_text(edge))) {
      auto it = model.vocab_index.find(tok);
      if (it != model.vocab_index.end()) x[it->second] += 1.0;
    }
  }
  std::size_t child_offset = pair ? vsize : 0;
  for (const std::string& tok : tokenize(edge.tree->node(edge.poi).text)) {
    auto it = model.vocab_index.find(tok);
    if (it != model.vocab_index.end()) x[child_offset + it->second] += 1.0;
  }
  return x;
}

double bow_probability(const BowModel& model, const Vec& features) {
  double z = model.bias;
  for (std::size_t i = 0; i < features.size(); ++i) z += model.weights[i] * features[i];
  return sigmoid(z);
}

void bow_loss_and_grad(const BowModel& model, std::span<const Vec> features,
                       std::span<const double> labels, double* loss, Vec* grad_w, double* grad_b) {
  std::size_t n = features.size();
  double inv = 1.0 / static_cast<double>(n);
  *loss = 0.0;
  grad_w->assign(model.weights.size(), 0.0);
  *grad_b = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double p = bow_probability(model, features[i]);
    double y = labels[i];
    // clamp keeps the log finite if the model saturates on separable data
    double q = std::min(std::max(y > 0.5 ? p : 1.0 - p, 1e-12), 1.0);
    *loss += -std::log(q);
    double delta = (p - y) * inv;
    axpy(*grad_w, features[i], delta);
    *grad_b += delta;
  }
  *loss *= inv;
  double reg = 0.0;
  for (std::size_t j = 0; j < model.weights.size(); ++j) {
    reg += model.weights[j] * model.weights[j];
    (*grad_w)[j] += model.config.l2 * model.weights[j];
  }
  *loss += 0.5 * model.config.l2 * reg;
}

BowTrainResult bow_train(std::span<const TrainEdge> edges, const BowConfig& config) {
  if (edges.empty()) throw Error(Errc::NoTrainingEdges, "no edges for the BoW baseline");

  BowTrainResult result;
  result.model.config = config;

  std::set<std::string> tokens;
  for (const TrainEdge& edge : edges) {
    if (config.features == BowFeatures::ParentChild)
      for (const std::string& tok : tokenize(parent_text(edge))) tokens.insert(tok);
    for (const std::string& tok : tokenize(edge.tree->node(edge.poi).text)) tokens.insert(tok);
  }
  if (tokens.empty()) throw Error(Errc::EmptyVocabulary, "training texts have no tokens");
  result.model.vocabulary.assign(tokens.begin(), tokens.end());
  for (std::size_t i = 0; i < result.model.vocabulary.size(); ++i)
    result.model.vocab_index[result.model.vocabulary[i]] = i;

  std::size_t vsize = result.model.vocabulary.size();
  result.model.weights.assign(config.features == BowFeatures::ParentChild ? 2 * vsize : vsize, 0.0);
  result.model.bias = 0.0;

  std::vector<Vec> features;
  std::vector<double> labels;
  features.reserve(edges.size());
  labels.reserve(edges.size());
  for (const TrainEdge& edge : edges) {
    features.push_back(bow_featurize(result.model, edge));
    labels.push_back(edge.label == Polarity::Attack ? 1.0 : 0.0);
  }

  Vec grad_w;
  double grad_b = 0.0, loss = 0.0;
  for (std::uint64_t epoch = 0; epoch < config.epochs; ++epoch) {
    bow_loss_and_grad(result.model, features, labels, &loss, &grad_w, &grad_b);
    result.loss_trace.push_back(loss);
    axpy(result.model.weights, grad_w, -config.learning_rate);
    result.model.bias -= config.learning_rate * grad_b;
  }
  return result;
}

Polarity bow_predict(const BowModel& model, const TrainEdge& edge) {
  double p_attack = bow_probability(model, bow_featurize(model, edge));
  return p_attack > 0.5 ? Polarity::Attack : Polarity::Support;
}

double bow_accuracy(const BowModel& model, std::span<const TrainEdge> edges) {
  if (edges.empty()) throw Error(Errc::EmptyInput, "no edges to score");
  std::size_t hits = 0;
  for (const TrainEdge& edge : edges)
    if (bow_predict(model, edge) == edge.label) ++hits;
  return static_cast<double>(hits) / static_cast<double>(edges.size());
}

// ---------------------------------------------------------------------------

Vec mlp_input(const MlpModel& model, const Encoder& encoder, const DiscussionTree& tree,
              const std::string& poi) {
  Vec u = encoder.embed(tree, poi);
  WalkSample sample = sample_walk(tree, poi, model.config.walk);
  std::vector<Vec> neighbors;
  neighbors.reserve(sample.visited.size());
  for (const std::string& id : sample.visited) neighbors.push_back(encoder.embed(tree, id));
  Vec v = aggregate(neighbors, std::nullopt, AggregationStrategy::Average);
  Vec input;
  input.reserve(u.size() + v.size());
  input.insert(input.end(), u.begin(), u.end());
  input.insert(input.end(), v.begin(), v.end());
  return input;
}

std::array<double, 2> mlp_forward(const MlpModel& model, const Vec& input) {
  Vec h = model.w1.matvec(input);
  for (std::size_t i = 0; i < h.size(); ++i) h[i] = std::tanh(h[i] + model.b1[i]);
  Vec logits = model.w2.matvec(h);
  logits[0] += model.b2[0];
  logits[1] += model.b2[1];
  double peak = std::max(logits[0], logits[1]);
  double e0 = std::exp(logits[0] - peak);
  double e1 = std::exp(logits[1] - peak);
  return {e0 / (e0 + e1), e1 / (e0 + e1)};
}

MlpTrainResult mlp_train(std::span<const DiscussionTree> trees, const MlpConfig& config) {
  Encoder encoder(config.encoder);
  std::vector<TrainEdge> edges = collect_edges(trees);
  if (edges.empty()) throw Error(Errc::NoTrainingEdges, "no edges for the MLP baseline");

  MlpTrainResult result;
  MlpModel& model = result.model;
  model.config = config;
  std::size_t in_dim = 2 * encoder.dim();

  SplitMix64 rng(StreamKey(config.seed).mix("mlp-init").stream().next());
  auto uniform_init = [&](Matrix& m, std::size_t rows, std::size_t cols) {
    m = Matrix(rows, cols);
    double bound = std::sqrt(6.0 / static_cast<double>(rows + cols));
    for (double& w : m.data) w = rng.uniform(-bound, bound);
  };
  uniform_init(model.w1, config.hidden, in_dim);
  model.b1.assign(config.hidden, 0.0);
  uniform_init(model.w2, 2, config.hidden);
  model.b2.assign(2, 0.0);

  // Frozen features: computed once, never touched by the optimizer.
  std::vector<Vec> inputs;
  std::vector<std::size_t> labels;
  inputs.reserve(edges.size());
  for (const TrainEdge& edge : edges) {
    inputs.push_back(mlp_input(model, encoder, *edge.tree, edge.poi));
    labels.push_back(edge.label == Polarity::Support ? kSupportClass : kAttackClass);
  }

  Matrix m1(config.hidden, in_dim), v1(config.hidden, in_dim);
  Vec mb1(config.hidden, 0.0), vb1(config.hidden, 0.0);
  Matrix m2(2, config.hidden), v2(2, config.hidden);
  Vec mb2(2, 0.0), vb2(2, 0.0);
  std::int64_t step = 0;

  std::vector<std::size_t> order(edges.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;

  for (std::uint64_t epoch = 0; epoch < config.epochs; ++epoch) {
    SplitMix64 erng(StreamKey(config.seed).mix("mlp-shuffle").mix(epoch).stream().next());
    shuffle(order, erng);

    double epoch_loss = 0.0;
    for (std::size_t start = 0; start < order.size(); start += config.batch_size) {
      std::size_t count = std::min<std::size_t>(config.batch_size, order.size() - start);
      Matrix g1(config.hidden, in_dim);
      Vec gb1(config.hidden, 0.0);
      Matrix g2(2, config.hidden);
      Vec gb2(2, 0.0);
      double batch_loss = 0.0;

      for (std::size_t i = 0; i < count; ++i) {
        const Vec& x = inputs[order[start + i]];
        std::size_t truth = labels[order[start + i]];

        Vec h = model.w1.matvec(x);
        for (std::size_t j = 0; j < h.size(); ++j) h[j] = std::tanh(h[j] + model.b1[j]);
        std::array<double, 2> p = mlp_forward(model, x);
        batch_loss += -std::log(std::max(p[truth], 1e-300));

        Vec dlogits = {p[0], p[1]};
        dlogits[truth] -= 1.0;
        g2.add_outer(dlogits, h);
        axpy(gb2, dlogits, 1.0);
        Vec dh = model.w2.matvec_transposed(dlogits);
        for (std::size_t j = 0; j < dh.size(); ++j) dh[j] *= 1.0 - h[j] * h[j];
        g1.add_outer(dh, x);
        axpy(gb1, dh, 1.0);
      }

      double inv = 1.0 / static_cast<double>(count);
      for (double& g : g1.data) g *= inv;
      for (double& g : gb1) g *= inv;
      for (double& g : g2.data) g *= inv;
      for (double& g : gb2) g *= inv;
      epoch_loss += batch_loss;

      ++step;
      adam_tensor(model.w1.data, m1.data, v1.data, g1.data, config.learning_rate, step);
      adam_tensor(model.b1, mb1, vb1, gb1, config.learning_rate, step);
      adam_tensor(model.w2.data, m2.data, v2.data, g2.data, config.learning_rate, step);
      adam_tensor(model.b2, mb2, vb2, gb2, config.learning_rate, step);
    }

    epoch_loss /= static_cast<double>(edges.size());
    result.loss_trace.push_back(epoch_loss);
    if (result.loss_trace.size() >= 2) {
      double prev = result.loss_trace[result.loss_trace.size() - 2];
      if (std::fabs(prev - epoch_loss) < config.convergence_tol) break;  // converged
    }
  }
  return result;
}

Polarity mlp_predict(const MlpModel& model, const Encoder& encoder, const DiscussionTree& tree,
                     const std::string& poi) {
  std::array<double, 2> p = mlp_forward(model, mlp_input(model, encoder, tree, poi));
  return p[kSupportClass] >= p[kAttackClass] ? Polarity::Support : Polarity::Attack;
}

double mlp_accuracy(const MlpModel& model, std::span<const DiscussionTree> trees) {
  Encoder encoder(model.config.encoder);
  std::vector<TrainEdge> edges = collect_edges(trees);
  if (edges.empty()) throw Error(Errc::EmptyInput, "no edges to score");
  std::size_t hits = 0;
  for (const TrainEdge& edge : edges)
    if (mlp_predict(model, encoder, *edge.tree, edge.poi) == edge.label) ++hits;
  return static_cast<double>(hits) / static_cast<double>(edges.size());
}

}  // namespace graphnli
