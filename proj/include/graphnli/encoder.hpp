#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>

#include "graphnli/linalg.hpp"
#include "graphnli/tree.hpp"

namespace graphnli {

// EmbeddingVector: fixed-dimension 64-bit real vector for one argument text.
using EmbeddingVector = Vec;

enum class EncoderKind { HashEmbed, TableLookup };

const char* encoder_kind_name(EncoderKind kind);
EncoderKind encoder_kind_from_name(const std::string& name);

struct EncoderSpec {
  EncoderKind kind = EncoderKind::HashEmbed;
  std::size_t dim = 128;
  std::uint64_t hash_seed = 0;
  std::optional<std::string> table_path;

  void validate() const;  // HashEmbed needs dim >= 8; TableLookup needs table_path
};

// Deterministic signed feature hashing: lowercase tokens, each hashed to a
// +/-1 one-hot, mean-pooled. Pure function of (text, spec) on every platform.
EmbeddingVector hash_embed(const std::string& text, const EncoderSpec& spec);

// Token index/sign derivation, exposed so tests can pin fixtures against an
// independent hash reimplementation.
std::pair<std::size_t, double> hash_embed_slot(const std::string& token, const EncoderSpec& spec);

// Precomputed embeddings keyed by node id, loaded from JSONL lines of
// {"id": ..., "values": [...]}. The first line fixes dim.
class EmbeddingTable {
 public:
  static EmbeddingTable load_file(const std::string& path);
  static EmbeddingTable load(std::istream& input);

  std::size_t dim() const { return dim_; }
  std::size_t size() const { return values_.size(); }
  const EmbeddingVector& lookup(const std::string& node_id) const;  // throws MissingNode
  void insert(const std::string& node_id, EmbeddingVector values);

  void save(std::ostream& out) const;

 private:
  std::size_t dim_ = 0;
  std::map<std::string, EmbeddingVector> values_;
};

// Trainable per-node projection standing in for encoder fine-tuning:
// out = tanh(weight * e + bias), one shared instance across all nodes.
struct ProjectionParams {
  Matrix weight;  // dim x dim
  Vec bias;       // dim

  // Uniform +/- sqrt(6 / (2 dim)) weights, zero bias, seeded.
  static ProjectionParams init(std::size_t dim, std::uint64_t seed);

  bool operator==(const ProjectionParams&) const = default;
};

EmbeddingVector project(const EmbeddingVector& e, const ProjectionParams& params);

// Backward pass for project(): given d loss / d out and the forward output,
// accumulates parameter gradients and returns d loss / d e.
Vec project_backward(const EmbeddingVector& e, const Vec& out, const Vec& grad_out,
                     const ProjectionParams& params, Matrix& grad_weight, Vec& grad_bias);

// Uniform front-end used by the pipeline: hash from text or look up by id.
class Encoder {
 public:
  explicit Encoder(EncoderSpec spec);

  const EncoderSpec& spec() const { return spec_; }
  std::size_t dim() const { return spec_.dim; }
  EmbeddingVector embed(const DiscussionTree& tree, const std::string& node_id) const;

 private:
  EncoderSpec spec_;
  std::optional<EmbeddingTable> table_;
};

}  // namespace graphnli
