#pragma once

#include <algorithm>
#include <cstdint>
#include <string>
#include <vector>

#include "simulst/errors.hpp"
#include "simulst/segmenter.hpp"
#include "simulst/stabilizer.hpp"
#include "simulst/util.hpp"

namespace simulst {

enum class EventKind {
  SegmentClosed,
  HypothesisEmitted,
  StableCommit,
  TranslationEmitted,
  SentenceCompleted,
};

inline const char* to_string(EventKind k) {
  switch (k) {
    case EventKind::SegmentClosed: return "SegmentClosed";
    case EventKind::HypothesisEmitted: return "HypothesisEmitted";
    case EventKind::StableCommit: return "StableCommit";
    case EventKind::TranslationEmitted: return "TranslationEmitted";
    case EventKind::SentenceCompleted: return "SentenceCompleted";
  }
  return "?";
}

inline EventKind event_kind_from_string(const std::string& s) {
  if (s == "SegmentClosed") return EventKind::SegmentClosed;
  if (s == "HypothesisEmitted") return EventKind::HypothesisEmitted;
  if (s == "StableCommit") return EventKind::StableCommit;
  if (s == "TranslationEmitted") return EventKind::TranslationEmitted;
  if (s == "SentenceCompleted") return EventKind::SentenceCompleted;
  throw SchemaError("unknown event kind '" + s + "'");
}

// One timestamped pipeline occurrence. A single struct holds the union of the
// per-kind payloads; to_json/from_json keep a fixed key set and order per
// kind so logs are byte-stable.
struct PipelineEvent {
  std::int64_t time_ms = 0;
  EventKind kind = EventKind::SegmentClosed;
  // SegmentClosed / HypothesisEmitted / StableCommit
  std::int64_t segment_index = 0;
  // SegmentClosed
  std::int64_t start_ms = 0;
  std::int64_t end_ms = 0;
  CutReason cut_reason = CutReason::EndOfStream;
  // HypothesisEmitted / StableCommit
  std::vector<std::string> words;
  std::vector<std::int64_t> word_end_ms;
  // TranslationEmitted / SentenceCompleted
  std::int64_t sentence_index = 0;
  // TranslationEmitted
  std::string token;
  // SentenceCompleted
  std::vector<std::string> source_words;
  std::string translation;

  static PipelineEvent segment_closed(const SpeechSegment& seg) {
    PipelineEvent e;
    e.time_ms = seg.end_ms;
    e.kind = EventKind::SegmentClosed;
    e.segment_index = seg.index;
    e.start_ms = seg.start_ms;
    e.end_ms = seg.end_ms;
    e.cut_reason = seg.cut_reason;
    return e;
  }

  static PipelineEvent hypothesis(std::int64_t time, std::int64_t segment,
                                  const std::vector<HypothesisWord>& hyp) {
    PipelineEvent e;
    e.time_ms = time;
    e.kind = EventKind::HypothesisEmitted;
    e.segment_index = segment;
    for (const auto& w : hyp) {
      e.words.push_back(w.text);
      e.word_end_ms.push_back(w.end_ms);
    }
    return e;
  }

  static PipelineEvent stable_commit(std::int64_t time, std::int64_t segment,
                                     const std::vector<CommittedWord>& committed) {
    PipelineEvent e;
    e.time_ms = time;
    e.kind = EventKind::StableCommit;
    e.segment_index = segment;
    for (const auto& w : committed) {
      e.words.push_back(w.text);
      e.word_end_ms.push_back(w.source_end_ms);
    }
    return e;
  }

  static PipelineEvent translation_token(std::int64_t time, std::int64_t sentence,
                                         const std::string& token) {
    PipelineEvent e;
    e.time_ms = time;
    e.kind = EventKind::TranslationEmitted;
    e.sentence_index = sentence;
    e.token = token;
    return e;
  }

  static PipelineEvent sentence_completed(std::int64_t time, std::int64_t sentence,
                                          std::vector<std::string> source_words,
                                          std::string translation) {
    PipelineEvent e;
    e.time_ms = time;
    e.kind = EventKind::SentenceCompleted;
    e.sentence_index = sentence;
    e.source_words = std::move(source_words);
    e.translation = std::move(translation);
    return e;
  }

  ordered_json to_json() const {
    ordered_json j;
    j["time_ms"] = time_ms;
    j["kind"] = to_string(kind);
    switch (kind) {
      case EventKind::SegmentClosed:
        j["segment_index"] = segment_index;
        j["start_ms"] = start_ms;
        j["end_ms"] = end_ms;
        j["cut_reason"] = to_string(cut_reason);
        break;
      case EventKind::HypothesisEmitted:
      case EventKind::StableCommit:
        j["segment_index"] = segment_index;
        j["words"] = words;
        j["word_end_ms"] = word_end_ms;
        break;
      case EventKind::TranslationEmitted:
        j["sentence_index"] = sentence_index;
        j["token"] = token;
        break;
      case EventKind::SentenceCompleted:
        j["sentence_index"] = sentence_index;
        j["source_words"] = source_words;
        j["translation"] = translation;
        break;
    }
    return j;
  }

  static PipelineEvent from_json(const ordered_json& j) {
    PipelineEvent e;
    e.time_ms = require_key(j, "time_ms", "event").get<std::int64_t>();
    e.kind = event_kind_from_string(require_key(j, "kind", "event").get<std::string>());
    switch (e.kind) {
      case EventKind::SegmentClosed:
        e.segment_index = require_key(j, "segment_index", "event").get<std::int64_t>();
        e.start_ms = require_key(j, "start_ms", "event").get<std::int64_t>();
        e.end_ms = require_key(j, "end_ms", "event").get<std::int64_t>();
        e.cut_reason =
            cut_reason_from_string(require_key(j, "cut_reason", "event").get<std::string>());
        break;
      case EventKind::HypothesisEmitted:
      case EventKind::StableCommit:
        e.segment_index = require_key(j, "segment_index", "event").get<std::int64_t>();
        e.words = require_key(j, "words", "event").get<std::vector<std::string>>();
        e.word_end_ms =
            require_key(j, "word_end_ms", "event").get<std::vector<std::int64_t>>();
        if (e.words.size() != e.word_end_ms.size())
          throw SchemaError("event: words and word_end_ms lengths differ");
        break;
      case EventKind::TranslationEmitted:
        e.sentence_index = require_key(j, "sentence_index", "event").get<std::int64_t>();
        e.token = require_key(j, "token", "event").get<std::string>();
        break;
      case EventKind::SentenceCompleted:
        e.sentence_index = require_key(j, "sentence_index", "event").get<std::int64_t>();
        e.source_words = require_key(j, "source_words", "event").get<std::vector<std::string>>();
        e.translation = require_key(j, "translation", "event").get<std::string>();
        break;
    }
    return e;
  }
};

inline std::vector<ordered_json> events_to_jsonl(const std::vector<PipelineEvent>& events) {
  std::vector<ordered_json> rows;
  rows.reserve(events.size());
  for (const auto& e : events) rows.push_back(e.to_json());
  return rows;
}

inline std::vector<PipelineEvent> events_from_jsonl(const std::vector<ordered_json>& rows) {
  std::vector<PipelineEvent> events;
  events.reserve(rows.size());
  for (const auto& r : rows) events.push_back(PipelineEvent::from_json(r));
  return events;
}

// --- emission log ---------------------------------------------------------------

struct EmittedToken {
  std::string text;
  std::int64_t time_ms = 0;
  std::int64_t sentence_index = 0;
};

// Per-sentence reference with its source-time interval; carried beside the
// event log (refs.jsonl) and joined to it for evaluation.
struct SentenceRef {
  std::int64_t index = 0;
  std::int64_t start_ms = 0;
  std::int64_t end_ms = 0;
  std::string reference;

  static SentenceRef from_json(const ordered_json& j) {
    SentenceRef r;
    r.index = require_key(j, "index", "reference").get<std::int64_t>();
    r.start_ms = require_key(j, "start_ms", "reference").get<std::int64_t>();
    r.end_ms = require_key(j, "end_ms", "reference").get<std::int64_t>();
    r.reference = require_key(j, "reference", "reference").get<std::string>();
    if (r.end_ms <= r.start_ms) throw SchemaError("reference: empty source interval");
    return r;
  }

  ordered_json to_json() const {
    ordered_json j;
    j["index"] = index;
    j["start_ms"] = start_ms;
    j["end_ms"] = end_ms;
    j["reference"] = reference;
    return j;
  }
};

struct EmissionLog {
  std::vector<EmittedToken> tokens;
  std::int64_t source_duration_ms = 0;
  std::vector<std::string> completed_translations;  // per completed sentence, in order
};

// Folds an event stream into the evaluation view: output tokens with times
// and sentence attribution, the source duration, and per-sentence final
// translations. Enforces event-time monotonicity and that sentence token
// ranges partition the output (indexes never regress).
inline EmissionLog replay_log(const std::vector<PipelineEvent>& events) {
  EmissionLog log;
  std::int64_t prev_time = 0;
  std::int64_t prev_sentence = -1;
  std::int64_t next_completed = 0;
  for (std::size_t k = 0; k < events.size(); ++k) {
    const auto& e = events[k];
    if (e.time_ms < prev_time)
      throw OrderError("event " + std::to_string(k) + ": time regressed to " +
                       std::to_string(e.time_ms) + " from " + std::to_string(prev_time));
    prev_time = e.time_ms;
    switch (e.kind) {
      case EventKind::SegmentClosed:
        if (e.end_ms != e.time_ms)
          throw SchemaError("event " + std::to_string(k) + ": segment end differs from time");
        log.source_duration_ms = std::max(log.source_duration_ms, e.end_ms);
        break;
      case EventKind::TranslationEmitted:
        if (e.sentence_index < prev_sentence)
          throw AlignmentGap("event " + std::to_string(k) + ": sentence index regressed");
        prev_sentence = e.sentence_index;
        log.tokens.push_back({e.token, e.time_ms, e.sentence_index});
        break;
      case EventKind::SentenceCompleted:
        if (e.sentence_index != next_completed)
          throw AlignmentGap("event " + std::to_string(k) + ": sentence " +
                            std::to_string(e.sentence_index) + " completed out of order");
        ++next_completed;
        log.completed_translations.push_back(e.translation);
        break;
      default:
        break;
    }
  }
  return log;
}

}  // namespace simulst
