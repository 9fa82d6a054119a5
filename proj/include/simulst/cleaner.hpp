#pragma once

#include <algorithm>
#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include "simulst/errors.hpp"
#include "simulst/language.hpp"
#include "simulst/util.hpp"

namespace simulst {

struct CorpusSample {
  std::string source;
  std::string target;
  std::string context;  // prior source sentence, possibly empty
  LanguagePair language_pair = LanguagePair::EnDe;

  static CorpusSample from_json(const ordered_json& j) {
    CorpusSample s;
    s.source = require_key(j, "source", "sample").get<std::string>();
    s.target = require_key(j, "target", "sample").get<std::string>();
    s.context = require_key(j, "context", "sample").get<std::string>();
    s.language_pair =
        language_pair_from_string(require_key(j, "language_pair", "sample").get<std::string>());
    return s;
  }

  ordered_json to_json() const {
    ordered_json j;
    j["source"] = source;
    j["target"] = target;
    j["context"] = context;
    j["language_pair"] = to_string(language_pair);
    return j;
  }
};

// Reference-free quality score in [0,1]; higher is better.
class QualityScorer {
 public:
  virtual ~QualityScorer() = default;
  virtual double score(const std::string& source, const std::string& target) = 0;
};

// Transparent stand-in for a neural QE model: Dice coefficient over the
// case-folded token sets of source and target. Crude, but deterministic and
// monotone in lexical overlap, which is all the pipeline needs.
class LexicalOverlapScorer : public QualityScorer {
 public:
  double score(const std::string& source, const std::string& target) override {
    const auto a = token_set(source);
    const auto b = token_set(target);
    if (a.empty() && b.empty()) return 1.0;
    if (a.empty() || b.empty()) return 0.0;
    std::size_t shared = 0;
    for (const auto& t : a)
      if (b.count(t)) ++shared;
    return 2.0 * static_cast<double>(shared) / static_cast<double>(a.size() + b.size());
  }

 private:
  static std::set<std::string> token_set(const std::string& text) {
    std::set<std::string> out;
    for (const auto& t : split_ws(text)) out.insert(ascii_lower(t));
    return out;
  }
};

// True when the text contains a run of two or more consecutive Latin letters;
// single letters are tolerated as romanized initials.
inline bool detect_latin_words(const std::string& text) {
  int run = 0;
  std::size_t i = 0;
  while (i < text.size()) {
    const char32_t c = utf8_next(text, i);
    const bool latin = (c >= U'A' && c <= U'Z') || (c >= U'a' && c <= U'z');
    run = latin ? run + 1 : 0;
    if (run >= 2) return true;
  }
  return false;
}

inline std::int64_t codepoint_length(const std::string& text) {
  return static_cast<std::int64_t>(utf8_decode(text).size());
}

namespace detail {

inline bool contains_markup(const std::string& text) {
  return text.find("...") != std::string::npos || text.find('[') != std::string::npos ||
         text.find(']') != std::string::npos || text.find('(') != std::string::npos ||
         text.find(')') != std::string::npos;
}

// Nonempty text whose every non-whitespace character is an uppercase ASCII
// letter.
inline bool all_capital_letters(const std::string& text) {
  bool saw_letter = false;
  for (char c : text) {
    if (is_ascii_space(c)) continue;
    if (c < 'A' || c > 'Z') return false;
    saw_letter = true;
  }
  return saw_letter;
}

inline std::string strip_dash_runs(std::string text) {
  std::size_t pos = 0;
  while ((pos = text.find("- ", pos)) != std::string::npos) text.replace(pos, 2, " ");
  return text;
}

}  // namespace detail

struct CleanReport {
  std::vector<CorpusSample> kept;
  std::int64_t input = 0;
  std::int64_t dropped_length = 0;       // step 1
  std::int64_t dropped_markup = 0;       // step 2
  std::int64_t dropped_latin = 0;        // step 3 (en-zh only)
  std::int64_t dropped_quality = 0;      // step 4, score below threshold
  std::int64_t dropped_scorer_error = 0; // step 4, scorer failed

  ordered_json to_json() const {
    ordered_json j;
    j["input"] = input;
    j["kept"] = static_cast<std::int64_t>(kept.size());
    j["dropped_length"] = dropped_length;
    j["dropped_markup"] = dropped_markup;
    j["dropped_latin"] = dropped_latin;
    j["dropped_quality"] = dropped_quality;
    j["dropped_scorer_error"] = dropped_scorer_error;
    return j;
  }
};

// Four-step corpus filter, applied in order per sample:
//   1. drop when source or context is shorter than 25 characters (code
//      points, whitespace included);
//   2. drop when source or target carries ellipses, brackets, or parentheses,
//      or consists only of capital letters; then collapse "- " to a space in
//      both;
//   3. (en-zh only) drop when the target still contains Latin-letter words;
//   4. drop when the quality score falls below the threshold (kept when equal);
//      a scorer failure drops the sample under its own count.
// Input order is preserved for kept samples.
inline CleanReport clean(const std::vector<CorpusSample>& samples, QualityScorer& scorer,
                         double threshold) {
  if (threshold < 0.0 || threshold > 1.0)
    throw ConfigError("clean: threshold must be in [0,1]");
  CleanReport report;
  report.input = static_cast<std::int64_t>(samples.size());
  for (const auto& input : samples) {
    if (codepoint_length(input.source) < 25 || codepoint_length(input.context) < 25) {
      ++report.dropped_length;
      continue;
    }
    if (detail::contains_markup(input.source) || detail::contains_markup(input.target) ||
        detail::all_capital_letters(input.source) || detail::all_capital_letters(input.target)) {
      ++report.dropped_markup;
      continue;
    }
    CorpusSample sample = input;
    sample.source = detail::strip_dash_runs(sample.source);
    sample.target = detail::strip_dash_runs(sample.target);
    if (sample.language_pair == LanguagePair::EnZh && detect_latin_words(sample.target)) {
      ++report.dropped_latin;
      continue;
    }
    double score = 0.0;
    try {
      score = scorer.score(sample.source, sample.target);
    } catch (const std::exception&) {
      ++report.dropped_scorer_error;
      continue;
    }
    if (score < threshold) {
      ++report.dropped_quality;
      continue;
    }
    report.kept.push_back(std::move(sample));
  }
  return report;
}

}  // namespace simulst
