#pragma once

#include <stdexcept>
#include <string>

namespace simulst {

// Base class for every error thrown by the library. CLI code catches this
// to print diagnostics and exit nonzero.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// A record does not match the documented schema (bad JSON, missing or
// unknown keys, wrong types, broken structural invariants).
class SchemaError : public Error {
 public:
  using Error::Error;
};

// Timestamps regressed where a monotone sequence is required.
class OrderError : public Error {
 public:
  using Error::Error;
};

// Configuration failed validation; message carries per-field paths.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Alignment segmentation over an empty source or target sentence.
class DegenerateAlignment : public Error {
 public:
  using Error::Error;
};

// Delimiter structure of a serialized prompt is unbalanced or out of order.
class MalformedPrompt : public Error {
 public:
  using Error::Error;
};

// A translation action was requested with no untranslated source words.
class EmptyChunk : public Error {
 public:
  using Error::Error;
};

// Latency metric over an empty emission list.
class EmptyOutput : public Error {
 public:
  using Error::Error;
};

// Sentence token ranges do not partition the emitted output.
class AlignmentGap : public Error {
 public:
  using Error::Error;
};

// Hypothesis and reference corpora differ in sentence count.
class LengthMismatch : public Error {
 public:
  using Error::Error;
};

// Fixture name not present in the registry.
class UnknownFixture : public Error {
 public:
  using Error::Error;
};

// A quality scorer could not produce a score for a sample.
class ScorerFailure : public Error {
 public:
  using Error::Error;
};

// A pipeline stage failed; carries the source-clock time of the failure.
class PipelineStageError : public Error {
 public:
  PipelineStageError(std::int64_t time_ms, const std::string& msg)
      : Error("t=" + std::to_string(time_ms) + "ms: " + msg), time_ms_(time_ms) {}
  std::int64_t time_ms() const { return time_ms_; }

 private:
  std::int64_t time_ms_;
};

}  // namespace simulst
