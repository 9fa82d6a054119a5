#pragma once

#include <algorithm>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "simulst/errors.hpp"
#include "simulst/language.hpp"
#include "simulst/util.hpp"

namespace simulst {

// --- aligned sentence pairs --------------------------------------------------

struct AlignedSentencePair {
  std::vector<std::string> source;
  std::vector<std::string> target;
  std::vector<std::string> context;                // prior source sentence, possibly empty
  std::vector<std::pair<int, int>> alignment;      // 1-based (source index, target index)

  void validate() const {
    for (const auto& [i, j] : alignment) {
      if (i < 1 || i > static_cast<int>(source.size()))
        throw SchemaError("alignment: source index " + std::to_string(i) + " out of range");
      if (j < 1 || j > static_cast<int>(target.size()))
        throw SchemaError("alignment: target index " + std::to_string(j) + " out of range");
    }
  }
};

// Pharaoh "i-j" pairs, 0-based in text form, 1-based in memory.
inline std::vector<std::pair<int, int>> parse_pharaoh(const std::string& line) {
  std::vector<std::pair<int, int>> pairs;
  for (const auto& item : split_ws(line)) {
    auto dash = item.find('-');
    if (dash == std::string::npos || dash == 0 || dash + 1 == item.size())
      throw SchemaError("alignment: bad pharaoh pair '" + item + "'");
    int i = 0, j = 0;
    try {
      i = std::stoi(item.substr(0, dash));
      j = std::stoi(item.substr(dash + 1));
    } catch (const std::exception&) {
      throw SchemaError("alignment: bad pharaoh pair '" + item + "'");
    }
    if (i < 0 || j < 0) throw SchemaError("alignment: bad pharaoh pair '" + item + "'");
    pairs.emplace_back(i + 1, j + 1);
  }
  return pairs;
}

// --- prompt plans ------------------------------------------------------------

struct IntervalSpan {
  int src_begin = 0, src_end = 0;  // 0-based [begin, end) over source words
  int tgt_begin = 0, tgt_end = 0;  // same over target words

  bool operator==(const IntervalSpan&) const = default;
};

struct PromptPlan {
  std::vector<IntervalSpan> intervals;

  // Contiguity, order, coverage of [0, n_src) x [0, n_tgt), nonempty spans.
  void validate(int n_src, int n_tgt) const {
    if (intervals.empty()) throw SchemaError("plan: no intervals");
    int s = 0, t = 0;
    for (const auto& iv : intervals) {
      if (iv.src_begin != s || iv.tgt_begin != t)
        throw SchemaError("plan: spans are not contiguous");
      if (iv.src_end <= iv.src_begin || iv.tgt_end <= iv.tgt_begin)
        throw SchemaError("plan: empty span");
      s = iv.src_end;
      t = iv.tgt_end;
    }
    if (s != n_src || t != n_tgt) throw SchemaError("plan: spans do not cover the sentence");
  }
};

// Splits an aligned pair into the finest sequence of (source span, target
// span) blocks such that every target word's aligned source words lie in its
// own block or an earlier one. With cuts written as the last 0-based index of
// each block, a cut pair (a, b) is legal iff a >= maxsrc(b), where maxsrc(b)
// is the largest source index aligned to any target <= b; minimizing each
// (b, a) in turn maximizes the block count (any feasible cut sequence
// pointwise dominates the greedy one). Among maximal partitions, source cuts
// are the earliest possible and target cuts the latest, so every target word
// lands in the earliest block its dependencies allow — unaligned ones
// included.
inline PromptPlan segment_alignment(const AlignedSentencePair& pair) {
  const int m = static_cast<int>(pair.source.size());
  const int n = static_cast<int>(pair.target.size());
  if (m == 0 || n == 0)
    throw DegenerateAlignment("segment_alignment: empty source or target sentence");
  pair.validate();

  std::vector<int> maxsrc(n, -1);  // maxsrc[b]: largest source index aligned within target 0..b
  for (const auto& [i, j] : pair.alignment) maxsrc[j - 1] = std::max(maxsrc[j - 1], i - 1);
  for (int b = 1; b < n; ++b) maxsrc[b] = std::max(maxsrc[b], maxsrc[b - 1]);

  // Forward pass: smallest legal cuts, giving the maximal count and the
  // lexicographically earliest source cuts.
  std::vector<int> cut_a, cut_b;
  int prev_a = -1, prev_b = -1;
  while (prev_b + 1 <= n - 2) {
    const int b = prev_b + 1;
    const int a = std::max(prev_a + 1, maxsrc[b]);
    if (a > m - 2) break;
    cut_a.push_back(a);
    cut_b.push_back(b);
    prev_a = a;
    prev_b = b;
  }
  // Backward pass: push each target cut as late as its source cut allows.
  int limit = n - 1;
  for (int k = static_cast<int>(cut_a.size()) - 1; k >= 0; --k) {
    int b = limit - 1;
    while (maxsrc[b] > cut_a[k]) --b;  // reaches the forward-pass cut at worst
    cut_b[k] = b;
    limit = b;
  }

  PromptPlan plan;
  int sa = 0, sb = 0;
  for (std::size_t k = 0; k < cut_a.size(); ++k) {
    plan.intervals.push_back({sa, cut_a[k] + 1, sb, cut_b[k] + 1});
    sa = cut_a[k] + 1;
    sb = cut_b[k] + 1;
  }
  plan.intervals.push_back({sa, m, sb, n});
  plan.validate(m, n);
  return plan;
}

// Seeded plan perturbation: a merge pass joins adjacent intervals, then a
// shift pass moves surviving internal source boundaries by up to max_shift
// words (target boundaries stay put), clamped so every span stays nonempty.
// Structural invariants survive; dependency closure intentionally may not.
inline PromptPlan merge_shift(const PromptPlan& plan, std::uint64_t seed, double merge_prob,
                              double shift_prob, int max_shift) {
  if (merge_prob < 0 || merge_prob > 1 || shift_prob < 0 || shift_prob > 1)
    throw ConfigError("merge_shift: probabilities must be in [0,1]");
  if (max_shift < 0) throw ConfigError("merge_shift: max_shift must be >= 0");
  if (plan.intervals.empty()) throw SchemaError("merge_shift: empty plan");

  StableRng rng(seed);
  std::vector<IntervalSpan> out;
  out.push_back(plan.intervals.front());
  for (std::size_t k = 1; k < plan.intervals.size(); ++k) {
    const auto& iv = plan.intervals[k];
    if (rng.next_bool(merge_prob)) {
      out.back().src_end = iv.src_end;
      out.back().tgt_end = iv.tgt_end;
    } else {
      out.push_back(iv);
    }
  }
  for (std::size_t k = 0; k + 1 < out.size(); ++k) {
    if (!rng.next_bool(shift_prob) || max_shift == 0) continue;
    const auto mag = static_cast<int>(rng.next_int(1, max_shift));
    const int delta = rng.next_bool(0.5) ? mag : -mag;
    int b = out[k].src_end + delta;
    b = std::max(b, out[k].src_begin + 1);
    b = std::min(b, out[k + 1].src_end - 1);
    out[k].src_end = b;
    out[k + 1].src_begin = b;
  }
  return PromptPlan{std::move(out)};
}

// --- serialization -----------------------------------------------------------

inline bool is_delimiter_token(const std::string& t) {
  return t == "<s>" || t == "<t>" || t == "</t>" || t == "</s>";
}

// Corpus words that would read as delimiters (optionally already escaped) gain
// one leading backslash; parsing strips exactly one.
inline std::string escape_word(const std::string& w) {
  std::size_t k = 0;
  while (k < w.size() && w[k] == '\\') ++k;
  if (is_delimiter_token(w.substr(k))) return "\\" + w;
  return w;
}

inline std::string unescape_word(const std::string& w) {
  std::size_t k = 0;
  while (k < w.size() && w[k] == '\\') ++k;
  if (k > 0 && is_delimiter_token(w.substr(k))) return w.substr(1);
  return w;
}

struct SerializedPrompt {
  std::string header;
  std::vector<std::string> tokens;
  std::vector<bool> loss_mask;
};

inline std::string prompt_header(const std::vector<std::string>& context, LanguagePair lp) {
  std::string h;
  if (!context.empty())
    h += "Use the following sentence as context: " + join_ws(context) + "\n";
  h += std::string("Now translate the following sentence from ") + source_language_name(lp) +
       " to " + target_language_name(lp) + " Assistant:";
  return h;
}

// Emits, per interval: <s> <t> source words </t> target words </s>. The mask
// is true exactly for tokens strictly after each </t> through its </s>,
// inclusive — the positions translation loss applies to.
inline SerializedPrompt serialize(const PromptPlan& plan, const AlignedSentencePair& pair,
                                  LanguagePair lp) {
  plan.validate(static_cast<int>(pair.source.size()), static_cast<int>(pair.target.size()));
  SerializedPrompt out;
  out.header = prompt_header(pair.context, lp);
  auto push = [&out](const std::string& t, bool mask) {
    out.tokens.push_back(t);
    out.loss_mask.push_back(mask);
  };
  for (const auto& iv : plan.intervals) {
    push("<s>", false);
    push("<t>", false);
    for (int i = iv.src_begin; i < iv.src_end; ++i) push(escape_word(pair.source[i]), false);
    push("</t>", false);
    for (int j = iv.tgt_begin; j < iv.tgt_end; ++j) push(escape_word(pair.target[j]), true);
    push("</s>", true);
  }
  return out;
}

struct ParsedPrompt {
  PromptPlan plan;
  std::vector<std::string> source;  // unescaped words, concatenated over intervals
  std::vector<std::string> target;
};

// Reconstructs interval spans and words from a token stream; throws
// MalformedPrompt on any delimiter imbalance or misorder.
inline ParsedPrompt parse_prompt(const std::vector<std::string>& tokens) {
  ParsedPrompt out;
  std::size_t p = 0;
  auto fail = [&](const std::string& why) {
    throw MalformedPrompt("prompt token " + std::to_string(p) + ": " + why);
  };
  while (p < tokens.size()) {
    IntervalSpan iv;
    iv.src_begin = static_cast<int>(out.source.size());
    iv.tgt_begin = static_cast<int>(out.target.size());
    if (tokens[p] != "<s>") fail("expected <s>");
    ++p;
    if (p >= tokens.size() || tokens[p] != "<t>") fail("expected <t>");
    ++p;
    while (p < tokens.size() && tokens[p] != "</t>") {
      if (is_delimiter_token(tokens[p])) fail("unexpected " + tokens[p] + " inside source span");
      out.source.push_back(unescape_word(tokens[p]));
      ++p;
    }
    if (p >= tokens.size()) fail("missing </t>");
    ++p;
    while (p < tokens.size() && tokens[p] != "</s>") {
      if (is_delimiter_token(tokens[p])) fail("unexpected " + tokens[p] + " inside target span");
      out.target.push_back(unescape_word(tokens[p]));
      ++p;
    }
    if (p >= tokens.size()) fail("missing </s>");
    ++p;
    iv.src_end = static_cast<int>(out.source.size());
    iv.tgt_end = static_cast<int>(out.target.size());
    out.plan.intervals.push_back(iv);
  }
  if (out.plan.intervals.empty()) throw MalformedPrompt("prompt has no intervals");
  return out;
}

// Closed token-index ranges [s_k, e_k] where loss applies: first token after
// each </t> through the matching </s>.
inline std::vector<std::pair<int, int>> loss_positions(const SerializedPrompt& prompt) {
  parse_prompt(prompt.tokens);  // structural validation
  std::vector<std::pair<int, int>> ranges;
  for (std::size_t p = 0; p < prompt.tokens.size(); ++p) {
    if (prompt.tokens[p] != "</t>") continue;
    std::size_t q = p + 1;
    while (prompt.tokens[q] != "</s>") ++q;  // parse above guarantees presence
    ranges.emplace_back(static_cast<int>(p) + 1, static_cast<int>(q));
  }
  return ranges;
}

}  // namespace simulst
