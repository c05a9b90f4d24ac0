#include "graphnli/encoder.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "graphnli/rng.hpp"
#include "graphnli/text.hpp"

namespace graphnli {

const char* encoder_kind_name(EncoderKind kind) {
  return kind == EncoderKind::HashEmbed ? "hash_embed" : "table_lookup";
}

EncoderKind encoder_kind_from_name(const std::string& name) {
  if (name == "hash_embed") return EncoderKind::HashEmbed;
  if (name == "table_lookup") return EncoderKind::TableLookup;
  throw Error(Errc::BadConfig, "unknown encoder kind \"" + name + "\"");
}

void EncoderSpec::validate() const {
  if (kind == EncoderKind::HashEmbed && dim < 8)
    throw Error(Errc::BadConfig, "hash_embed needs dim >= 8");
  if (kind == EncoderKind::TableLookup && !table_path)
    throw Error(Errc::BadConfig, "table_lookup needs a table_path");
}

std::pair<std::size_t, double> hash_embed_slot(const std::string& token, const EncoderSpec& spec) {
  std::uint64_t s = spec.hash_seed;
  std::uint64_t key1 = splitmix64(s);
  std::uint64_t key2 = splitmix64(s);
  std::uint64_t h1 = fnv1a64(token, 0xcbf29ce484222325ULL ^ key1);
  std::uint64_t h2 = fnv1a64(token, 0xcbf29ce484222325ULL ^ key2);
  return {static_cast<std::size_t>(h1 % spec.dim), (h2 & 1u) ? -1.0 : 1.0};
}

EmbeddingVector hash_embed(const std::string& text, const EncoderSpec& spec) {
  spec.validate();
  std::vector<std::string> tokens = tokenize(text);
  if (tokens.empty())
    throw Error(Errc::EmptyAfterTokenize, "no alphanumeric tokens in \"" + text + "\"");

  EmbeddingVector out(spec.dim, 0.0);
  for (const std::string& tok : tokens) {
    auto [index, sign] = hash_embed_slot(tok, spec);
    out[index] += sign;
  }
  double inv = 1.0 / static_cast<double>(tokens.size());
  for (double& x : out) x *= inv;
  return out;
}

EmbeddingTable EmbeddingTable::load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::IoError, "cannot open embedding table " + path);
  return load(in);
}

EmbeddingTable EmbeddingTable::load(std::istream& input) {
  EmbeddingTable table;
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(input, raw)) {
    ++line_no;
    if (trim(raw).empty()) continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(raw);
    } catch (const nlohmann::json::exception& e) {
      throw Error(Errc::MalformedJson, e.what(), line_no);
    }
    if (!j.is_object() || !j.contains("id") || !j.at("id").is_string() || !j.contains("values") ||
        !j.at("values").is_array())
      throw Error(Errc::MalformedJson, "embedding line needs an id and a values array", line_no);
    EmbeddingVector values = j.at("values").get<EmbeddingVector>();
    if (table.dim_ == 0) {
      if (values.empty()) throw Error(Errc::DimMismatch, "zero-dimension embedding", line_no);
      table.dim_ = values.size();
    } else if (values.size() != table.dim_) {
      throw Error(Errc::DimMismatch,
                  "embedding of dim " + std::to_string(values.size()) + " in a table of dim " +
                      std::to_string(table.dim_),
                  line_no);
    }
    table.values_[j.at("id").get<std::string>()] = std::move(values);
  }
  return table;
}

const EmbeddingVector& EmbeddingTable::lookup(const std::string& node_id) const {
  auto it = values_.find(node_id);
  if (it == values_.end()) throw Error(Errc::MissingNode, "no embedding for node " + node_id);
  return it->second;
}

void EmbeddingTable::insert(const std::string& node_id, EmbeddingVector values) {
  if (dim_ == 0) dim_ = values.size();
  if (values.size() != dim_) throw Error(Errc::DimMismatch, "embedding dim mismatch on insert");
  values_[node_id] = std::move(values);
}

void EmbeddingTable::save(std::ostream& out) const {
  for (const auto& [id, values] : values_) {
    nlohmann::ordered_json j;
    j["id"] = id;
    j["values"] = values;
    out << j.dump() << '\n';
  }
}

ProjectionParams ProjectionParams::init(std::size_t dim, std::uint64_t seed) {
  ProjectionParams params;
  params.weight = Matrix(dim, dim);
  params.bias = Vec(dim, 0.0);
  double bound = std::sqrt(6.0 / (2.0 * static_cast<double>(dim)));
  SplitMix64 rng(StreamKey(seed).mix("projection-init").stream().next());
  for (double& w : params.weight.data) w = rng.uniform(-bound, bound);
  return params;
}

EmbeddingVector project(const EmbeddingVector& e, const ProjectionParams& params) {
  if (e.size() != params.weight.cols || params.bias.size() != params.weight.rows)
    throw Error(Errc::DimMismatch, "projection dims do not match the input");
  Vec out = params.weight.matvec(e);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = std::tanh(out[i] + params.bias[i]);
  return out;
}

Vec project_backward(const EmbeddingVector& e, const Vec& out, const Vec& grad_out,
                     const ProjectionParams& params, Matrix& grad_weight, Vec& grad_bias) {
  // d tanh(z) / d z = 1 - out^2
  Vec dz(out.size());
  for (std::size_t i = 0; i < out.size(); ++i) dz[i] = grad_out[i] * (1.0 - out[i] * out[i]);
  grad_weight.add_outer(dz, e);
  axpy(grad_bias, dz, 1.0);
  return params.weight.matvec_transposed(dz);
}

Encoder::Encoder(EncoderSpec spec) : spec_(std::move(spec)) {
  spec_.validate();
  if (spec_.kind == EncoderKind::TableLookup) {
    table_ = EmbeddingTable::load_file(*spec_.table_path);
    spec_.dim = table_->dim();  // the table is authoritative for dim
  }
}

EmbeddingVector Encoder::embed(const DiscussionTree& tree, const std::string& node_id) const {
  if (spec_.kind == EncoderKind::TableLookup) return table_->lookup(node_id);
  return hash_embed(tree.node(node_id).text, spec_);
}

}  // namespace graphnli
