#pragma once

#include <optional>
#include <stdexcept>
#include <string>

namespace graphnli {

enum class Errc {
  // tree construction
  NoRoot,
  MultipleRoots,
  DanglingParent,
  CycleDetected,
  DuplicateId,
  RootHasPolarity,
  NonRootMissingPolarity,
  EmptyText,
  NoEdges,
  // ingest
  MalformedJson,
  TooFewDebates,
  BandInfeasible,
  // walks
  PoiIsRoot,
  UnknownNode,
  // BAF
  UnknownArgument,
  // encoder
  EmptyAfterTokenize,
  MissingNode,
  DimMismatch,
  // aggregation
  EmptyInput,
  MissingWeights,
  NonPositiveWeight,
  // training
  NoTrainingEdges,
  EmptyVocabulary,
  // evaluation
  LengthMismatch,
  // plumbing
  IoError,
  BadConfig,
};

const char* errc_name(Errc code);

class Error : public std::runtime_error {
 public:
  Error(Errc code, std::string message)
      : std::runtime_error(std::string(errc_name(code)) + ": " + message), code_(code) {}

  Error(Errc code, std::string message, std::size_t line)
      : std::runtime_error(std::string(errc_name(code)) + " at line " + std::to_string(line) +
                           ": " + message),
        code_(code),
        line_(line) {}

  Errc code() const { return code_; }
  std::optional<std::size_t> line() const { return line_; }

 private:
  Errc code_;
  std::optional<std::size_t> line_;
};

}  // namespace graphnli
