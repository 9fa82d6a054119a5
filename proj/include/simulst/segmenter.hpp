#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "simulst/errors.hpp"
#include "simulst/util.hpp"

namespace simulst {

enum class CutReason { MaxDuration, UnvoicedRun, EndOfStream };

inline const char* to_string(CutReason r) {
  switch (r) {
    case CutReason::MaxDuration: return "max_duration";
    case CutReason::UnvoicedRun: return "unvoiced_run";
    case CutReason::EndOfStream: return "end_of_stream";
  }
  return "?";
}

inline CutReason cut_reason_from_string(std::string_view s) {
  if (s == "max_duration") return CutReason::MaxDuration;
  if (s == "unvoiced_run") return CutReason::UnvoicedRun;
  if (s == "end_of_stream") return CutReason::EndOfStream;
  throw SchemaError("unknown cut_reason '" + std::string(s) + "'");
}

struct SegmenterConfig {
  std::int64_t max_unvoiced_ms = 100;  // longest tolerated sub-threshold run
  double voice_threshold = 0.5;        // probabilities below this count as unvoiced
  std::int64_t max_segment_ms = 500;   // hard cap on segment length

  void validate() const {
    if (max_unvoiced_ms < 0) throw ConfigError("segmenter.max_unvoiced_ms: must be >= 0");
    if (max_segment_ms <= 0) throw ConfigError("segmenter.max_segment_ms: must be > 0");
    if (voice_threshold < 0.0 || voice_threshold > 1.0)
      throw ConfigError("segmenter.voice_threshold: must be in [0,1]");
  }
};

struct SpeechSegment {
  std::int64_t index = 0;
  std::int64_t start_ms = 0;
  std::int64_t end_ms = 0;
  CutReason cut_reason = CutReason::EndOfStream;

  ordered_json to_json() const {
    ordered_json j;
    j["index"] = index;
    j["start_ms"] = start_ms;
    j["end_ms"] = end_ms;
    j["cut_reason"] = to_string(cut_reason);
    return j;
  }
};

// Streaming segmentation state machine. Frames go in; closed segments come
// out. Segments tile the stream with no gaps: unvoiced audio stays inside
// them, so downstream consumers see contiguous time.
//
// Cut rules, checked after every slice of audio:
//   - the continuous unvoiced run strictly exceeds max_unvoiced_ms, or
//   - the open segment has reached max_segment_ms exactly (frames are split
//     mid-frame so no segment ever exceeds the cap).
// When both fire on the same slice the unvoiced-run reason wins. A frame with
// voice_prob exactly at the threshold counts as voiced. The unvoiced-run
// accumulator resets on every voiced slice and on every cut.
class VadSegmenter {
 public:
  explicit VadSegmenter(SegmenterConfig cfg) : cfg_(cfg) { cfg_.validate(); }

  // One frame may close several segments (a long frame against a small cap),
  // hence the vector.
  std::vector<SpeechSegment> push_frame(std::int64_t duration_ms, double voice_prob) {
    if (duration_ms <= 0) throw SchemaError("segmenter: frame duration must be positive");
    std::vector<SpeechSegment> closed;
    const bool voiced = voice_prob >= cfg_.voice_threshold;
    std::int64_t remaining = duration_ms;
    while (remaining > 0) {
      const std::int64_t room = cfg_.max_segment_ms - (cursor_ - seg_start_);
      const std::int64_t take = std::min(remaining, room);
      cursor_ += take;
      remaining -= take;
      if (voiced)
        unvoiced_run_ = 0;
      else
        unvoiced_run_ += take;
      if (unvoiced_run_ > cfg_.max_unvoiced_ms)
        closed.push_back(close(CutReason::UnvoicedRun));
      else if (cursor_ - seg_start_ >= cfg_.max_segment_ms)
        closed.push_back(close(CutReason::MaxDuration));
    }
    return closed;
  }

  // Closes the open segment at end of stream. Idempotent: a second call finds
  // the open segment empty and returns nothing.
  std::optional<SpeechSegment> flush() {
    if (cursor_ == seg_start_) return std::nullopt;
    return close(CutReason::EndOfStream);
  }

  std::int64_t cursor_ms() const { return cursor_; }
  std::int64_t open_start_ms() const { return seg_start_; }
  bool open_segment_nonempty() const { return cursor_ > seg_start_; }
  std::int64_t next_index() const { return next_index_; }
  const SegmenterConfig& config() const { return cfg_; }

 private:
  SpeechSegment close(CutReason reason) {
    SpeechSegment seg{next_index_++, seg_start_, cursor_, reason};
    seg_start_ = cursor_;
    unvoiced_run_ = 0;
    return seg;
  }

  SegmenterConfig cfg_;
  std::int64_t cursor_ = 0;
  std::int64_t seg_start_ = 0;
  std::int64_t unvoiced_run_ = 0;
  std::int64_t next_index_ = 0;
};

}  // namespace simulst
