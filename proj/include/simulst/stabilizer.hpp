#pragma once

#include <cstdint>
#include <deque>
#include <string>
#include <vector>

#include "simulst/errors.hpp"
#include "simulst/util.hpp"

namespace simulst {

struct HypothesisWord {
  std::string text;
  std::int64_t end_ms = 0;  // when the word's audio ends
};

struct CommittedWord {
  std::string text;
  std::int64_t commit_time_ms = 0;  // stream time the word became stable
  std::int64_t source_end_ms = 0;   // audio end time carried from the hypothesis
};

struct StabilizerConfig {
  int agreement_window = 2;        // consecutive hypotheses that must agree
  int cutoff_threshold_words = 8;  // context carried into the next segment

  void validate() const {
    if (agreement_window < 2) throw ConfigError("stabilizer.agreement_window: must be >= 2");
    if (cutoff_threshold_words < 0)
      throw ConfigError("stabilizer.cutoff_threshold_words: must be >= 0");
  }
};

// Local-agreement stabilization over one ASR hypothesis stream. Within a
// segment, a word is committed once the last agreement_window hypotheses all
// carry it at the same position; closing the segment forces the remainder of
// the final hypothesis stable. The committed transcript is append-only.
class HypothesisStabilizer {
 public:
  explicit HypothesisStabilizer(StabilizerConfig cfg) : cfg_(cfg) { cfg_.validate(); }

  // Feeds the next hypothesis for the open segment; returns newly committed
  // words. Word equality ignores surrounding whitespace.
  std::vector<CommittedWord> step(const std::vector<HypothesisWord>& hypothesis,
                                  std::int64_t now_ms) {
    history_.push_back(hypothesis);
    while (history_.size() > static_cast<std::size_t>(cfg_.agreement_window))
      history_.pop_front();
    std::vector<CommittedWord> fresh;
    if (history_.size() < static_cast<std::size_t>(cfg_.agreement_window)) return fresh;
    const auto& latest = history_.back();
    std::size_t agree = latest.size();
    for (const auto& h : history_) {
      agree = std::min(agree, h.size());
      for (std::size_t k = 0; k < agree; ++k) {
        if (trim(h[k].text) != trim(latest[k].text)) {
          agree = k;
          break;
        }
      }
    }
    for (std::size_t k = committed_in_segment_; k < agree; ++k)
      fresh.push_back(commit(latest[k], now_ms));
    return fresh;
  }

  // Forces the rest of the segment's final hypothesis stable and rolls the
  // context buffer over to this segment's transcript (kept as-is when the
  // segment produced nothing). Resets per-segment state.
  std::vector<CommittedWord> close_segment(std::int64_t now_ms) {
    std::vector<CommittedWord> fresh;
    if (!history_.empty()) {
      const auto& final_hyp = history_.back();
      for (std::size_t k = committed_in_segment_; k < final_hyp.size(); ++k)
        fresh.push_back(commit(final_hyp[k], now_ms));
    }
    if (!segment_words_.empty()) {
      const std::size_t keep =
          std::min(segment_words_.size(), static_cast<std::size_t>(cfg_.cutoff_threshold_words));
      context_.assign(segment_words_.end() - keep, segment_words_.end());
    }
    history_.clear();
    segment_words_.clear();
    committed_in_segment_ = 0;
    return fresh;
  }

  // Previous segment's transcript, already truncated to the cutoff.
  const std::vector<std::string>& context_for_next_call() const { return context_; }

  const std::vector<CommittedWord>& transcript() const { return transcript_; }

 private:
  CommittedWord commit(const HypothesisWord& w, std::int64_t now_ms) {
    CommittedWord c{trim(w.text), now_ms, w.end_ms};
    transcript_.push_back(c);
    segment_words_.push_back(c.text);
    ++committed_in_segment_;
    return c;
  }

  StabilizerConfig cfg_;
  std::deque<std::vector<HypothesisWord>> history_;
  std::vector<CommittedWord> transcript_;
  std::vector<std::string> segment_words_;
  std::vector<std::string> context_;
  std::size_t committed_in_segment_ = 0;
};

}  // namespace simulst
