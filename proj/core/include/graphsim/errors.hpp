// Exception types shared across the library. Each subsystem throws its own
// type; validation errors carry a kind so callers can distinguish causes.
#pragma once

#include <stdexcept>
#include <string>

namespace graphsim {

enum class GraphErrorKind {
  endpoint_out_of_range,
  self_loop,
  duplicate_edge,
  bad_node_count,
  parse,
  io,
};

class GraphError : public std::runtime_error {
 public:
  GraphError(GraphErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}
  GraphErrorKind kind() const { return kind_; }

 private:
  GraphErrorKind kind_;
};

// Invalid generator parameters or a target density no parameterization of the
// family can reach.
class ParamError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Resampling budget exhausted without producing an acceptable graph.
class GenerationError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class MeasureErrorKind {
  length_mismatch,
  invalid_distribution,
  undefined_measure,
  invalid_partition,
};

class MeasureError : public std::runtime_error {
 public:
  MeasureError(MeasureErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}
  MeasureErrorKind kind() const { return kind_; }

 private:
  MeasureErrorKind kind_;
};

class RenderError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class RaterErrorKind {
  unparseable_response,
  score_out_of_range,
  transport,
  retries_exhausted,
};

class RaterError : public std::runtime_error {
 public:
  RaterError(RaterErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}
  RaterErrorKind kind() const { return kind_; }

 private:
  RaterErrorKind kind_;
};

enum class AnalysisErrorKind {
  zero_variance,
  insufficient_data,
};

class AnalysisError : public std::runtime_error {
 public:
  AnalysisError(AnalysisErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}
  AnalysisErrorKind kind() const { return kind_; }

 private:
  AnalysisErrorKind kind_;
};

// Bad or missing run configuration (also: missing credential, missing
// cost confirmation). CLI maps this to exit code 2.
class ConfigError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Corpus artifact on disk does not match its manifest hash.
class CorpusError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace graphsim
