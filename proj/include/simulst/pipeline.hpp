#pragma once

#include <cstdint>
#include <vector>

#include "simulst/agent.hpp"
#include "simulst/config.hpp"
#include "simulst/engines.hpp"
#include "simulst/errors.hpp"
#include "simulst/events.hpp"
#include "simulst/segmenter.hpp"
#include "simulst/stabilizer.hpp"
#include "simulst/timeline.hpp"

namespace simulst {

// Drives segmenter -> stabilizer -> agent over a scripted timeline and
// returns the full event log. Deterministic: the log is a pure function of
// (timeline, config, engines). Events at equal timestamps keep causal order:
// SegmentClosed, HypothesisEmitted, StableCommit, then translation events.
class PipelineRunner {
 public:
  PipelineRunner(const PipelineConfig& cfg, AsrEngine& asr, TranslationEngine& translator)
      : segmenter_(cfg.segmenter),
        stabilizer_(cfg.stabilizer),
        agent_(cfg.agent, translator),
        asr_(asr) {}

  std::vector<PipelineEvent> run(const Timeline& timeline) {
    timeline.validate();
    std::int64_t now = 0;
    for (const auto& frame : timeline.frames) {
      for (const auto& seg : segmenter_.push_frame(frame.duration_ms, frame.voice_prob))
        on_segment_closed(seg);
      now += frame.duration_ms;
      poll_open_segment(now);
    }
    if (const auto seg = segmenter_.flush()) on_segment_closed(*seg);
    emit_agent_events(agent_.flush(), now);
    return std::move(events_);
  }

  const HypothesisStabilizer& stabilizer() const { return stabilizer_; }

 private:
  void on_segment_closed(const SpeechSegment& seg) {
    events_.push_back(PipelineEvent::segment_closed(seg));
    std::vector<CommittedWord> fresh;
    const auto hyp = asr_.transcribe(seg.start_ms, seg.end_ms,
                                     stabilizer_.context_for_next_call(), true);
    if (hyp) {
      events_.push_back(PipelineEvent::hypothesis(seg.end_ms, seg.index, *hyp));
      fresh = stabilizer_.step(*hyp, seg.end_ms);
    }
    auto forced = stabilizer_.close_segment(seg.end_ms);
    fresh.insert(fresh.end(), forced.begin(), forced.end());
    if (!fresh.empty()) {
      events_.push_back(PipelineEvent::stable_commit(seg.end_ms, seg.index, fresh));
      emit_agent_events(agent_.ingest(fresh), seg.end_ms);
    }
  }

  void poll_open_segment(std::int64_t now) {
    if (!segmenter_.open_segment_nonempty()) return;
    const auto hyp = asr_.transcribe(segmenter_.open_start_ms(), now,
                                     stabilizer_.context_for_next_call(), false);
    if (!hyp) return;
    events_.push_back(PipelineEvent::hypothesis(now, segmenter_.next_index(), *hyp));
    const auto fresh = stabilizer_.step(*hyp, now);
    if (!fresh.empty()) {
      events_.push_back(PipelineEvent::stable_commit(now, segmenter_.next_index(), fresh));
      emit_agent_events(agent_.ingest(fresh), now);
    }
  }

  void emit_agent_events(const std::vector<AgentEvent>& agent_events, std::int64_t now) {
    for (const auto& ev : agent_events) {
      if (ev.kind == AgentEvent::Kind::Translation) {
        for (const auto& token : ev.tokens)
          events_.push_back(PipelineEvent::translation_token(now, ev.sentence_index, token));
      } else {
        events_.push_back(PipelineEvent::sentence_completed(now, ev.sentence_index,
                                                            ev.source_words, ev.translation));
      }
    }
  }

  VadSegmenter segmenter_;
  HypothesisStabilizer stabilizer_;
  TranslationAgent agent_;
  AsrEngine& asr_;
  std::vector<PipelineEvent> events_;
};

inline std::vector<PipelineEvent> run_pipeline(const Timeline& timeline,
                                               const PipelineConfig& cfg, AsrEngine& asr,
                                               TranslationEngine& translator) {
  PipelineRunner runner(cfg, asr, translator);
  return runner.run(timeline);
}

}  // namespace simulst
