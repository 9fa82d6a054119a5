#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "simulst/errors.hpp"
#include "simulst/prompt.hpp"
#include "simulst/sentence.hpp"
#include "simulst/stabilizer.hpp"
#include "simulst/timeline.hpp"
#include "simulst/util.hpp"

namespace simulst {

// --- ASR side ----------------------------------------------------------------

// Incremental transcription over the open segment. transcribe() is a poll: it
// may return nothing when the engine has no new hypothesis for the interval
// (segment_start_ms, now_ms]. Reference engines are deterministic.
class AsrEngine {
 public:
  virtual ~AsrEngine() = default;
  virtual std::optional<std::vector<HypothesisWord>> transcribe(
      std::int64_t segment_start_ms, std::int64_t now_ms,
      const std::vector<std::string>& context, bool final_call) = 0;
};

// Perfect ASR over the scripted ground-truth words. A word belongs to the
// segment its end time falls in (start exclusive, end inclusive); a
// hypothesis is delivered only when new words have finished, so successive
// hypotheses grow and never revise.
class OracleAsrEngine : public AsrEngine {
 public:
  explicit OracleAsrEngine(std::vector<TimedWord> words) : words_(std::move(words)) {}

  std::optional<std::vector<HypothesisWord>> transcribe(std::int64_t segment_start_ms,
                                                        std::int64_t now_ms,
                                                        const std::vector<std::string>&,
                                                        bool) override {
    if (segment_start_ms != segment_start_) {
      segment_start_ = segment_start_ms;
      delivered_ = 0;
    }
    std::vector<HypothesisWord> hyp;
    for (const auto& w : words_)
      if (w.end_ms > segment_start_ms && w.end_ms <= now_ms) hyp.push_back({w.text, w.end_ms});
    if (hyp.empty() || hyp.size() == delivered_) return std::nullopt;
    delivered_ = hyp.size();
    return hyp;
  }

 private:
  std::vector<TimedWord> words_;
  std::int64_t segment_start_ = -1;
  std::size_t delivered_ = 0;
};

// Replays a fixed hypothesis trace: one pending row is delivered per poll once
// the clock reaches its interval end. Rows: {"interval_end_ms": int, "words":
// [str], "word_end_ms": [int] (optional, defaults to interval_end_ms)}.
class ScriptedAsrEngine : public AsrEngine {
 public:
  struct Row {
    std::int64_t interval_end_ms = 0;
    std::vector<HypothesisWord> words;
  };

  explicit ScriptedAsrEngine(std::vector<Row> rows) : rows_(std::move(rows)) {}

  static ScriptedAsrEngine from_jsonl(const std::vector<ordered_json>& lines) {
    std::vector<Row> rows;
    for (const auto& j : lines) {
      Row row;
      row.interval_end_ms = require_key(j, "interval_end_ms", "asr trace").get<std::int64_t>();
      const auto& words = require_key(j, "words", "asr trace");
      std::vector<std::int64_t> ends;
      if (j.contains("word_end_ms")) ends = j["word_end_ms"].get<std::vector<std::int64_t>>();
      if (!ends.empty() && ends.size() != words.size())
        throw SchemaError("asr trace: word_end_ms length differs from words");
      for (std::size_t k = 0; k < words.size(); ++k)
        row.words.push_back(
            {words[k].get<std::string>(), ends.empty() ? row.interval_end_ms : ends[k]});
      rows.push_back(std::move(row));
    }
    return ScriptedAsrEngine(std::move(rows));
  }

  std::optional<std::vector<HypothesisWord>> transcribe(std::int64_t, std::int64_t now_ms,
                                                        const std::vector<std::string>&,
                                                        bool) override {
    if (next_ >= rows_.size() || rows_[next_].interval_end_ms > now_ms) return std::nullopt;
    return rows_[next_++].words;
  }

 private:
  std::vector<Row> rows_;
  std::size_t next_ = 0;
};

// --- translation side ----------------------------------------------------------

// Generates target tokens for the prompt's trailing open interval. Output is
// expected to end with "</s>"; the agent enforces a token budget regardless.
class TranslationEngine {
 public:
  virtual ~TranslationEngine() = default;
  virtual std::vector<std::string> generate(const SerializedPrompt& prompt) = 0;
};

// Source words of the trailing open interval (after the last <t>, before its
// </t> if already present), unescaped.
inline std::vector<std::string> open_chunk_words(const SerializedPrompt& prompt) {
  std::size_t begin = prompt.tokens.size();
  for (std::size_t p = prompt.tokens.size(); p-- > 0;) {
    if (prompt.tokens[p] == "<t>") {
      begin = p + 1;
      break;
    }
  }
  std::vector<std::string> words;
  for (std::size_t p = begin; p < prompt.tokens.size(); ++p) {
    if (prompt.tokens[p] == "</t>") break;
    words.push_back(unescape_word(prompt.tokens[p]));
  }
  return words;
}

// Copies the open chunk verbatim.
class IdentityEngine : public TranslationEngine {
 public:
  std::vector<std::string> generate(const SerializedPrompt& prompt) override {
    auto out = open_chunk_words(prompt);
    out.push_back("</s>");
    return out;
  }
};

// Word-for-word map; unmapped words pass through. With lookahead_delay=1 the
// engine holds back the newest pending word until it sees the next chunk or a
// sentence-terminal word, mimicking engines that wait for one word of
// context. A stream that stops mid-sentence leaves the held word untranslated.
class DictionaryEngine : public TranslationEngine {
 public:
  DictionaryEngine(std::map<std::string, std::string> map, int lookahead_delay = 0)
      : map_(std::move(map)), lookahead_(lookahead_delay) {
    if (lookahead_ < 0 || lookahead_ > 1)
      throw ConfigError("dictionary engine: lookahead_delay must be 0 or 1");
  }

  std::vector<std::string> generate(const SerializedPrompt& prompt) override {
    auto queue = pending_;
    pending_.clear();
    for (auto& w : open_chunk_words(prompt)) queue.push_back(std::move(w));
    if (lookahead_ == 1 && !queue.empty() && !is_sentence_terminal(queue.back())) {
      pending_.push_back(queue.back());
      queue.pop_back();
    }
    std::vector<std::string> out;
    for (const auto& w : queue) {
      auto it = map_.find(w);
      out.push_back(it == map_.end() ? w : it->second);
    }
    out.push_back("</s>");
    return out;
  }

 private:
  std::map<std::string, std::string> map_;
  int lookahead_ = 0;
  std::vector<std::string> pending_;
};

// Replays fixed generations; an exhausted trace yields bare "</s>".
class ScriptedTranslationEngine : public TranslationEngine {
 public:
  explicit ScriptedTranslationEngine(std::vector<std::vector<std::string>> outputs)
      : outputs_(std::move(outputs)) {}

  std::vector<std::string> generate(const SerializedPrompt&) override {
    if (next_ >= outputs_.size()) return {"</s>"};
    return outputs_[next_++];
  }

 private:
  std::vector<std::vector<std::string>> outputs_;
  std::size_t next_ = 0;
};

// --- engine construction from scenario specs -----------------------------------

// {"type": "identity"} | {"type": "dict", "map": {...}, "lookahead": 0|1}
// | {"type": "scripted", "outputs": [[tok, ...], ...]}
inline std::unique_ptr<TranslationEngine> make_translation_engine(const ordered_json& spec) {
  const auto type = require_key(spec, "type", "engine spec").get<std::string>();
  if (type == "identity") return std::make_unique<IdentityEngine>();
  if (type == "dict") {
    std::map<std::string, std::string> map;
    for (const auto& [k, v] : require_key(spec, "map", "engine spec").items())
      map[k] = v.get<std::string>();
    const int lookahead = spec.contains("lookahead") ? spec["lookahead"].get<int>() : 0;
    return std::make_unique<DictionaryEngine>(std::move(map), lookahead);
  }
  if (type == "scripted") {
    std::vector<std::vector<std::string>> outputs;
    for (const auto& row : require_key(spec, "outputs", "engine spec"))
      outputs.push_back(row.get<std::vector<std::string>>());
    return std::make_unique<ScriptedTranslationEngine>(std::move(outputs));
  }
  throw ConfigError("engine spec: unknown type '" + type + "'");
}

}  // namespace simulst
