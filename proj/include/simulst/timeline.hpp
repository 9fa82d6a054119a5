#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "simulst/errors.hpp"
#include "simulst/util.hpp"

namespace simulst {

// One fixed-size slice of the input stream with a voice-activity probability.
struct AudioFrame {
  std::int64_t duration_ms = 0;
  double voice_prob = 0.0;
};

// A word of ground-truth speech pinned to the time its last audio leaves the
// microphone.
struct TimedWord {
  std::string text;
  std::int64_t end_ms = 0;
};

// Scripted input stream: frames plus the words spoken over them. Drives the
// oracle engines and the pipeline runner.
struct Timeline {
  std::vector<AudioFrame> frames;
  std::vector<TimedWord> words;

  std::int64_t total_duration_ms() const {
    std::int64_t t = 0;
    for (const auto& f : frames) t += f.duration_ms;
    return t;
  }

  void validate() const {
    std::int64_t total = 0;
    for (std::size_t i = 0; i < frames.size(); ++i) {
      if (frames[i].duration_ms <= 0)
        throw SchemaError("timeline: frame " + std::to_string(i) + " has nonpositive duration");
      if (frames[i].voice_prob < 0.0 || frames[i].voice_prob > 1.0)
        throw SchemaError("timeline: frame " + std::to_string(i) + " probability outside [0,1]");
      total += frames[i].duration_ms;
    }
    std::int64_t prev = -1;
    for (std::size_t i = 0; i < words.size(); ++i) {
      const auto& w = words[i];
      if (w.text.empty() || trim(w.text).empty())
        throw SchemaError("timeline: word " + std::to_string(i) + " is blank");
      if (w.end_ms <= prev)
        throw SchemaError("timeline: word " + std::to_string(i) + " end time not increasing");
      if (w.end_ms > total)
        throw SchemaError("timeline: word " + std::to_string(i) + " ends after the stream");
      prev = w.end_ms;
    }
  }

  static Timeline from_json(const ordered_json& j) {
    Timeline tl;
    const auto& frames = require_key(j, "frames", "timeline");
    if (!frames.is_array()) throw SchemaError("timeline: 'frames' must be an array");
    for (const auto& f : frames) {
      AudioFrame fr;
      fr.duration_ms = require_key(f, "duration_ms", "timeline frame").get<std::int64_t>();
      fr.voice_prob = require_key(f, "voice_prob", "timeline frame").get<double>();
      tl.frames.push_back(fr);
    }
    const auto& words = require_key(j, "words", "timeline");
    if (!words.is_array()) throw SchemaError("timeline: 'words' must be an array");
    for (const auto& w : words) {
      TimedWord tw;
      tw.text = require_key(w, "text", "timeline word").get<std::string>();
      tw.end_ms = require_key(w, "end_ms", "timeline word").get<std::int64_t>();
      tl.words.push_back(std::move(tw));
    }
    tl.validate();
    return tl;
  }

  ordered_json to_json() const {
    ordered_json j;
    j["frames"] = ordered_json::array();
    for (const auto& f : frames) {
      ordered_json fr;
      fr["duration_ms"] = f.duration_ms;
      fr["voice_prob"] = f.voice_prob;
      j["frames"].push_back(std::move(fr));
    }
    j["words"] = ordered_json::array();
    for (const auto& w : words) {
      ordered_json tw;
      tw["text"] = w.text;
      tw["end_ms"] = w.end_ms;
      j["words"].push_back(std::move(tw));
    }
    return j;
  }
};

}  // namespace simulst
