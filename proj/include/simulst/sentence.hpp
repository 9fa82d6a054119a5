#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <vector>

#include "simulst/util.hpp"

namespace simulst {

// Lowercased tokens that end in '.' but do not close a sentence.
inline const std::vector<std::string>& abbreviation_list() {
  static const std::vector<std::string> abbrevs = {
      "dr.",  "mr.",  "mrs.", "ms.",  "prof.", "st.",   "jr.",  "sr.",  "vs.",
      "etc.", "e.g.", "i.e.", "u.s.", "a.m.",  "p.m.",  "no.",  "fig.", "inc.",
  };
  return abbrevs;
}

inline bool is_terminal_codepoint(char32_t cp) {
  return cp == U'.' || cp == U'!' || cp == U'?' || cp == U'。' || cp == U'！' || cp == U'？';
}

// True when the token closes a sentence: it ends in terminal punctuation and
// is not a known abbreviation.
inline bool is_sentence_terminal(const std::string& word) {
  auto cps = utf8_decode(word);
  if (cps.empty() || !is_terminal_codepoint(cps.back())) return false;
  const std::string low = ascii_lower(word);
  for (const auto& a : abbreviation_list())
    if (low == a) return false;
  return true;
}

struct SentenceSpan {
  std::size_t begin = 0;  // word index range [begin, end)
  std::size_t end = 0;
  bool terminated = false;

  bool operator==(const SentenceSpan&) const = default;
};

// Rule-based sentence splitting over a word buffer. A boundary falls after
// every sentence-terminal token; trailing words without one form a final
// unterminated span. Empty input yields no spans.
inline std::vector<SentenceSpan> split_sentences(const std::vector<std::string>& words) {
  std::vector<SentenceSpan> spans;
  std::size_t begin = 0;
  for (std::size_t i = 0; i < words.size(); ++i) {
    if (is_sentence_terminal(words[i])) {
      spans.push_back({begin, i + 1, true});
      begin = i + 1;
    }
  }
  if (begin < words.size()) spans.push_back({begin, words.size(), false});
  return spans;
}

}  // namespace simulst
