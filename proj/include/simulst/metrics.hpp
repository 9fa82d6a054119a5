#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "simulst/errors.hpp"
#include "simulst/events.hpp"
#include "simulst/util.hpp"

namespace simulst {

// --- latency -------------------------------------------------------------------

enum class LatencyUnit { Word, Char };

inline LatencyUnit latency_unit_from_string(const std::string& s) {
  if (s == "word") return LatencyUnit::Word;
  if (s == "char") return LatencyUnit::Char;
  throw ConfigError("unknown latency unit '" + s + "' (expected word or char)");
}

struct Emission {
  std::string text;
  std::int64_t time_ms = 0;
};

// Expands emissions into metric units: one per token in word mode, one per
// non-whitespace code point (at the token's time) in char mode.
inline std::vector<std::int64_t> emission_unit_times(const std::vector<Emission>& tokens,
                                                     LatencyUnit unit) {
  std::vector<std::int64_t> times;
  for (const auto& t : tokens) {
    const std::int64_t n = unit == LatencyUnit::Word ? 1 : count_chars(t.text);
    for (std::int64_t k = 0; k < n; ++k) times.push_back(t.time_ms);
  }
  return times;
}

inline std::int64_t reference_length(const std::string& reference, LatencyUnit unit) {
  return unit == LatencyUnit::Word ? static_cast<std::int64_t>(split_ws(reference).size())
                                   : count_chars(reference);
}

// Length-adaptive average lagging. With N output units at times t_1..t_N,
// d_i = t_i - (i-1) * T_src / max(N, ref_len), averaged over i = 1..tau where
// tau is the first index with t_i >= T_src (N when none reaches it).
inline double laal(const std::vector<Emission>& tokens, std::int64_t t_src_ms,
                   std::int64_t ref_len, LatencyUnit unit) {
  const auto times = emission_unit_times(tokens, unit);
  const auto n = static_cast<std::int64_t>(times.size());
  if (n == 0) throw EmptyOutput("laal: no output units");
  const double denom = static_cast<double>(std::max(n, ref_len));
  std::int64_t tau = n;
  for (std::int64_t i = 0; i < n; ++i) {
    if (times[i] >= t_src_ms) {
      tau = i + 1;
      break;
    }
  }
  double sum = 0.0;
  for (std::int64_t i = 0; i < tau; ++i)
    sum += static_cast<double>(times[i]) - static_cast<double>(i) * t_src_ms / denom;
  return sum / static_cast<double>(tau);
}

struct SentenceLatency {
  std::int64_t index = 0;
  double laal_ms = 0.0;
  std::int64_t token_count = 0;
};

struct StreamLatencyReport {
  double stream_laal_ms = 0.0;
  std::vector<SentenceLatency> per_sentence;
};

// Stream-level latency: LAAL per reference sentence with emission times
// re-based to the sentence's source interval, averaged (unweighted) over
// sentences. Every output token must belong to a listed sentence, and every
// sentence must have produced output.
inline StreamLatencyReport stream_laal(const EmissionLog& log,
                                       const std::vector<SentenceRef>& refs, LatencyUnit unit) {
  if (refs.empty()) throw AlignmentGap("stream_laal: no reference sentences");
  std::map<std::int64_t, const SentenceRef*> by_index;
  for (const auto& r : refs) {
    if (!by_index.emplace(r.index, &r).second)
      throw SchemaError("stream_laal: duplicate reference index " + std::to_string(r.index));
  }
  std::map<std::int64_t, std::vector<Emission>> grouped;
  for (const auto& t : log.tokens) {
    if (!by_index.count(t.sentence_index))
      throw AlignmentGap("stream_laal: token attributed to unknown sentence " +
                         std::to_string(t.sentence_index));
    grouped[t.sentence_index].push_back({t.text, t.time_ms});
  }
  StreamLatencyReport report;
  double sum = 0.0;
  for (const auto& r : refs) {
    auto it = grouped.find(r.index);
    if (it == grouped.end())
      throw EmptyOutput("stream_laal: sentence " + std::to_string(r.index) +
                        " produced no output");
    std::vector<Emission> rebased = it->second;
    for (auto& e : rebased) e.time_ms -= r.start_ms;
    const double value =
        laal(rebased, r.end_ms - r.start_ms, reference_length(r.reference, unit), unit);
    report.per_sentence.push_back(
        {r.index, value, static_cast<std::int64_t>(it->second.size())});
    sum += value;
  }
  report.stream_laal_ms = sum / static_cast<double>(refs.size());
  return report;
}

// --- BLEU ----------------------------------------------------------------------

enum class BleuUnit { Word13a, Char };
enum class BleuSmoothing { None, Exp };

inline BleuUnit bleu_unit_from_string(const std::string& s) {
  if (s == "word") return BleuUnit::Word13a;
  if (s == "char") return BleuUnit::Char;
  throw ConfigError("unknown BLEU unit '" + s + "' (expected word or char)");
}

namespace detail {

inline bool in_13a_punct_class(char32_t c) {
  // The classic mteval character class: {-~ [-` space-& (-+ :-@ and /.
  return (c >= U'{' && c <= U'~') || (c >= U'[' && c <= U'`') || (c >= U' ' && c <= U'&') ||
         (c >= U'(' && c <= U'+') || (c >= U':' && c <= U'@') || c == U'/';
}

inline bool is_digit_cp(char32_t c) { return c >= U'0' && c <= U'9'; }

inline void replace_all(std::string& s, const std::string& from, const std::string& to) {
  std::size_t pos = 0;
  while ((pos = s.find(from, pos)) != std::string::npos) {
    s.replace(pos, from.size(), to);
    pos += to.size();
  }
}

}  // namespace detail

// Reimplementation of the mteval v13a tokenizer rules: entity unescaping,
// spacing around punctuation, and period/comma splitting away from digits.
inline std::vector<std::string> tokenize_13a(const std::string& text) {
  std::string s = text;
  detail::replace_all(s, "<skipped>", "");
  detail::replace_all(s, "-\n", "");
  detail::replace_all(s, "\n", " ");
  if (s.find('&') != std::string::npos) {
    detail::replace_all(s, "&quot;", "\"");
    detail::replace_all(s, "&amp;", "&");
    detail::replace_all(s, "&lt;", "<");
    detail::replace_all(s, "&gt;", ">");
  }
  auto cps = utf8_decode(" " + s + " ");

  // Pad the punctuation class with spaces.
  std::vector<char32_t> pass1;
  for (char32_t c : cps) {
    if (detail::in_13a_punct_class(c)) {
      pass1.push_back(U' ');
      pass1.push_back(c);
      pass1.push_back(U' ');
    } else {
      pass1.push_back(c);
    }
  }
  // ([^0-9])([.,]) -> "\1 \2 "  then  ([.,])([^0-9]) -> " \1 \2", with the
  // non-overlapping left-to-right consumption of sequential regex passes.
  std::vector<char32_t> pass2;
  for (std::size_t i = 0; i < pass1.size();) {
    if (i + 1 < pass1.size() && !detail::is_digit_cp(pass1[i]) &&
        (pass1[i + 1] == U'.' || pass1[i + 1] == U',')) {
      pass2.push_back(pass1[i]);
      pass2.push_back(U' ');
      pass2.push_back(pass1[i + 1]);
      pass2.push_back(U' ');
      i += 2;
    } else {
      pass2.push_back(pass1[i]);
      ++i;
    }
  }
  std::vector<char32_t> pass3;
  for (std::size_t i = 0; i < pass2.size();) {
    if (i + 1 < pass2.size() && (pass2[i] == U'.' || pass2[i] == U',') &&
        !detail::is_digit_cp(pass2[i + 1])) {
      pass3.push_back(U' ');
      pass3.push_back(pass2[i]);
      pass3.push_back(U' ');
      pass3.push_back(pass2[i + 1]);
      i += 2;
    } else {
      pass3.push_back(pass2[i]);
      ++i;
    }
  }
  std::vector<char32_t> pass4;
  for (std::size_t i = 0; i < pass3.size();) {
    if (i + 1 < pass3.size() && detail::is_digit_cp(pass3[i]) && pass3[i + 1] == U'-') {
      pass4.push_back(pass3[i]);
      pass4.push_back(U' ');
      pass4.push_back(pass3[i + 1]);
      pass4.push_back(U' ');
      i += 2;
    } else {
      pass4.push_back(pass3[i]);
      ++i;
    }
  }

  std::vector<std::string> tokens;
  std::string cur;
  for (char32_t c : pass4) {
    if (is_unicode_space(c)) {
      if (!cur.empty()) tokens.push_back(std::move(cur));
      cur.clear();
    } else {
      utf8_append(cur, c);
    }
  }
  if (!cur.empty()) tokens.push_back(std::move(cur));
  return tokens;
}

// One token per non-whitespace code point.
inline std::vector<std::string> tokenize_chars(const std::string& text) {
  std::vector<std::string> tokens;
  std::size_t i = 0;
  while (i < text.size()) {
    const char32_t c = utf8_next(text, i);
    if (is_unicode_space(c)) continue;
    std::string t;
    utf8_append(t, c);
    tokens.push_back(std::move(t));
  }
  return tokens;
}

struct BleuReport {
  double bleu = 0.0;
  std::array<double, 4> precisions{};  // fractions in [0,1]
  double brevity_penalty = 1.0;
  std::int64_t hyp_len = 0;
  std::int64_t ref_len = 0;
};

// Corpus BLEU: up-to-4-gram modified precision, geometric mean, brevity
// penalty. No smoothing by default; exp smoothing halves zero-count
// precisions the way mteval does, for tiny corpora.
inline BleuReport corpus_bleu(const std::vector<std::string>& hypotheses,
                              const std::vector<std::string>& references, BleuUnit unit,
                              BleuSmoothing smoothing = BleuSmoothing::None) {
  if (hypotheses.size() != references.size())
    throw LengthMismatch("corpus_bleu: " + std::to_string(hypotheses.size()) +
                         " hypotheses vs " + std::to_string(references.size()) + " references");
  if (hypotheses.empty()) throw LengthMismatch("corpus_bleu: empty corpus");

  auto tokenize = [unit](const std::string& s) {
    return unit == BleuUnit::Word13a ? tokenize_13a(s) : tokenize_chars(s);
  };

  std::array<std::int64_t, 4> matches{}, totals{};
  std::int64_t hyp_len = 0, ref_len = 0;
  for (std::size_t s = 0; s < hypotheses.size(); ++s) {
    const auto hyp = tokenize(hypotheses[s]);
    const auto ref = tokenize(references[s]);
    hyp_len += static_cast<std::int64_t>(hyp.size());
    ref_len += static_cast<std::int64_t>(ref.size());
    for (int n = 1; n <= 4; ++n) {
      auto ngrams = [n](const std::vector<std::string>& words) {
        std::map<std::string, std::int64_t> counts;
        for (std::size_t i = 0; i + n <= words.size(); ++i) {
          std::string key;
          for (int k = 0; k < n; ++k) {
            if (k) key += '\x1f';
            key += words[i + k];
          }
          ++counts[key];
        }
        return counts;
      };
      const auto hyp_counts = ngrams(hyp);
      const auto ref_counts = ngrams(ref);
      for (const auto& [gram, count] : hyp_counts) {
        totals[n - 1] += count;
        auto it = ref_counts.find(gram);
        if (it != ref_counts.end()) matches[n - 1] += std::min(count, it->second);
      }
    }
  }

  BleuReport report;
  report.hyp_len = hyp_len;
  report.ref_len = ref_len;
  if (hyp_len == 0) return report;  // empty hypothesis corpus scores 0

  double log_sum = 0.0;
  double smooth = 1.0;
  for (int n = 0; n < 4; ++n) {
    double p;
    if (totals[n] > 0 && matches[n] > 0) {
      p = static_cast<double>(matches[n]) / static_cast<double>(totals[n]);
    } else if (smoothing == BleuSmoothing::Exp) {
      smooth *= 2.0;
      p = 1.0 / (smooth * static_cast<double>(std::max<std::int64_t>(totals[n], 1)));
    } else {
      report.precisions[n] = 0.0;
      return report;  // a zero precision zeroes unsmoothed BLEU
    }
    report.precisions[n] = p;
    log_sum += std::log(p) / 4.0;
  }
  report.brevity_penalty =
      hyp_len >= ref_len
          ? 1.0
          : std::exp(1.0 - static_cast<double>(ref_len) / static_cast<double>(hyp_len));
  report.bleu = 100.0 * report.brevity_penalty * std::exp(log_sum);
  return report;
}

}  // namespace simulst
