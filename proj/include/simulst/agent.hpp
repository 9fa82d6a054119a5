#pragma once

#include <cstdint>
#include <iostream>
#include <string>
#include <vector>

#include "simulst/engines.hpp"
#include "simulst/errors.hpp"
#include "simulst/language.hpp"
#include "simulst/prompt.hpp"
#include "simulst/sentence.hpp"
#include "simulst/stabilizer.hpp"

namespace simulst {

enum class ActionTrigger { ChunkSize, SentenceBoundary, Flush };

inline const char* to_string(ActionTrigger t) {
  switch (t) {
    case ActionTrigger::ChunkSize: return "chunk_size";
    case ActionTrigger::SentenceBoundary: return "sentence_boundary";
    case ActionTrigger::Flush: return "flush";
  }
  return "?";
}

struct AgentConfig {
  int min_chunk_size_words = 3;
  LanguagePair language_pair = LanguagePair::EnDe;
  bool strict_chunk_trigger = false;     // trigger on count > MCS instead of >=
  bool memory_bank_translation = false;  // cache the translation instead of the source
  int generation_budget = 64;            // hard cap on tokens per action

  void validate() const {
    if (min_chunk_size_words < 1) throw ConfigError("agent.min_chunk_size_words: must be >= 1");
    if (generation_budget < 1) throw ConfigError("agent.generation_budget: must be >= 1");
  }
};

struct AgentEvent {
  enum class Kind { Translation, Completion };
  Kind kind = Kind::Translation;
  std::int64_t sentence_index = 0;
  // Translation
  ActionTrigger trigger = ActionTrigger::ChunkSize;
  std::vector<std::string> chunk;   // source words sent in this action
  std::vector<std::string> tokens;  // target tokens produced (</s> stripped)
  // Completion
  std::vector<std::string> source_words;
  std::string translation;
};

// Buffers stable transcript words, splits them into sentences, and fires
// translation actions when (1) the oldest sentence's untranslated word count
// reaches the minimum chunk size or (2) the buffer holds more than one
// sentence. Completed sentences leave the buffer and become the single-slot
// context memory for the next sentence's prompts. Only the oldest sentence
// ever appears in the live prompt.
class TranslationAgent {
 public:
  TranslationAgent(AgentConfig cfg, TranslationEngine& engine) : cfg_(cfg), engine_(engine) {
    cfg_.validate();
  }

  std::vector<AgentEvent> ingest(const std::vector<CommittedWord>& words) {
    for (const auto& w : words) buffer_.push_back({w.text, false});
    std::vector<AgentEvent> out;
    process(false, out);
    return out;
  }

  // End of stream: everything left is translated (even short chunks) and all
  // remaining sentences complete.
  std::vector<AgentEvent> flush() {
    std::vector<AgentEvent> out;
    process(true, out);
    return out;
  }

  // Prompt for the next action: memory-bank header, the closed intervals of
  // the current sentence, then an open interval holding the untranslated
  // words of the oldest sentence.
  SerializedPrompt build_incremental_prompt() const {
    const auto chunk = untranslated_oldest();
    if (chunk.empty())
      throw EmptyChunk("build_incremental_prompt: no untranslated words in the oldest sentence");
    SerializedPrompt prompt;
    prompt.header = prompt_header(memory_bank_, cfg_.language_pair);
    prompt.tokens = live_tokens_;
    prompt.tokens.push_back("<s>");
    prompt.tokens.push_back("<t>");
    for (const auto& w : chunk) prompt.tokens.push_back(escape_word(w));
    prompt.tokens.push_back("</t>");
    prompt.loss_mask.assign(prompt.tokens.size(), false);
    bool in_loss = false;
    for (std::size_t p = 0; p < prompt.tokens.size(); ++p) {
      if (prompt.tokens[p] == "</t>") {
        in_loss = true;
        continue;
      }
      if (prompt.tokens[p] == "</s>") {
        prompt.loss_mask[p] = in_loss;
        in_loss = false;
        continue;
      }
      if (in_loss) prompt.loss_mask[p] = true;
    }
    return prompt;
  }

  const std::vector<std::string>& running_translation() const { return running_translation_; }
  const std::vector<std::string>& memory_bank() const { return memory_bank_; }
  std::int64_t completed_sentences() const { return completed_; }
  std::size_t buffered_words() const { return buffer_.size(); }

 private:
  struct BufferWord {
    std::string text;
    bool translated = false;
  };

  std::vector<std::string> buffer_texts() const {
    std::vector<std::string> t;
    t.reserve(buffer_.size());
    for (const auto& w : buffer_) t.push_back(w.text);
    return t;
  }

  // Untranslated words of the oldest sentence (always a suffix of it).
  std::vector<std::string> untranslated_oldest() const {
    const auto spans = split_sentences(buffer_texts());
    std::vector<std::string> out;
    if (spans.empty()) return out;
    for (std::size_t k = spans[0].begin; k < spans[0].end; ++k)
      if (!buffer_[k].translated) out.push_back(buffer_[k].text);
    return out;
  }

  void process(bool flushing, std::vector<AgentEvent>& out) {
    while (true) {
      const auto spans = split_sentences(buffer_texts());
      if (spans.empty()) break;
      if (spans.size() > 1 || flushing) {
        const auto trigger =
            spans.size() > 1 ? ActionTrigger::SentenceBoundary : ActionTrigger::Flush;
        if (!untranslated_oldest().empty()) translate_oldest(trigger, out);
        complete_oldest(spans[0], out);
        continue;
      }
      const auto pending = untranslated_oldest().size();
      const auto floor = static_cast<std::size_t>(cfg_.min_chunk_size_words);
      const bool fire = cfg_.strict_chunk_trigger ? pending > floor : pending >= floor;
      if (!fire) break;
      translate_oldest(ActionTrigger::ChunkSize, out);
    }
  }

  void translate_oldest(ActionTrigger trigger, std::vector<AgentEvent>& out) {
    const auto prompt = build_incremental_prompt();
    const auto chunk = open_chunk_words(prompt);
    auto raw = engine_.generate(prompt);
    if (raw.size() > static_cast<std::size_t>(cfg_.generation_budget)) {
      std::cerr << "warning: generation budget (" << cfg_.generation_budget
                << " tokens) exceeded; forcing </s>\n";
      raw.resize(cfg_.generation_budget);
      raw.push_back("</s>");
    }
    std::vector<std::string> emitted;
    bool closed = false;
    for (const auto& t : raw) {
      if (t == "</s>") {
        closed = true;
        break;
      }
      emitted.push_back(t);
    }
    if (!closed) std::cerr << "warning: generation ended without </s>; appending it\n";

    // Close the interval in the live prompt and mark the chunk consumed.
    live_tokens_ = prompt.tokens;
    for (const auto& t : emitted) live_tokens_.push_back(escape_word(t));
    live_tokens_.push_back("</s>");
    const auto spans = split_sentences(buffer_texts());
    for (std::size_t k = spans[0].begin; k < spans[0].end; ++k) buffer_[k].translated = true;

    for (const auto& t : emitted) {
      running_translation_.push_back(t);
      sentence_tokens_.push_back(t);
    }
    AgentEvent ev;
    ev.kind = AgentEvent::Kind::Translation;
    ev.sentence_index = completed_;
    ev.trigger = trigger;
    ev.chunk = chunk;
    ev.tokens = emitted;
    out.push_back(std::move(ev));
  }

  void complete_oldest(const SentenceSpan& span, std::vector<AgentEvent>& out) {
    AgentEvent ev;
    ev.kind = AgentEvent::Kind::Completion;
    ev.sentence_index = completed_;
    for (std::size_t k = span.begin; k < span.end; ++k) ev.source_words.push_back(buffer_[k].text);
    ev.translation = join_ws(sentence_tokens_);
    memory_bank_ = cfg_.memory_bank_translation ? sentence_tokens_ : ev.source_words;
    buffer_.erase(buffer_.begin() + span.begin, buffer_.begin() + span.end);
    sentence_tokens_.clear();
    live_tokens_.clear();
    ++completed_;
    out.push_back(std::move(ev));
  }

  AgentConfig cfg_;
  TranslationEngine& engine_;
  std::vector<BufferWord> buffer_;
  std::vector<std::string> running_translation_;
  std::vector<std::string> sentence_tokens_;
  std::vector<std::string> live_tokens_;
  std::vector<std::string> memory_bank_;
  std::int64_t completed_ = 0;
};

}  // namespace simulst
