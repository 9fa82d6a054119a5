#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "simulst/cleaner.hpp"
#include "simulst/config.hpp"
#include "simulst/errors.hpp"
#include "simulst/events.hpp"
#include "simulst/timeline.hpp"
#include "simulst/util.hpp"

namespace simulst {

// A self-contained runnable scenario: input timeline, per-sentence references
// with source intervals, a translation-engine spec, and the pipeline config.
struct Scenario {
  std::string name;
  PipelineConfig config;
  Timeline timeline;
  std::vector<SentenceRef> refs;
  ordered_json engine_spec;
};

namespace detail {

inline void add_region(Timeline& tl, std::int64_t from_ms, std::int64_t to_ms, double prob,
                       std::int64_t frame_ms) {
  for (std::int64_t t = from_ms; t < to_ms; t += frame_ms)
    tl.frames.push_back({frame_ms, prob});
}

// Two speakers' worth of greetings: three sentences over ten seconds, with a
// long silence after the first. Word timings are chosen so the chunk-size
// grid {1,3,5,7} spreads emission times apart (the sweep regression relies on
// that separation).
inline Scenario greetings_fixture() {
  Scenario sc;
  sc.name = "greetings";
  sc.config = preset("en-de-low");

  constexpr std::int64_t frame = 20;
  constexpr double speech = 0.9, silence = 0.05;
  add_region(sc.timeline, 0, 200, silence, frame);
  add_region(sc.timeline, 200, 1500, speech, frame);
  add_region(sc.timeline, 1500, 5200, silence, frame);
  add_region(sc.timeline, 5200, 8400, speech, frame);
  add_region(sc.timeline, 8400, 8500, silence, frame);
  add_region(sc.timeline, 8500, 9500, speech, frame);
  add_region(sc.timeline, 9500, 10000, silence, frame);

  sc.timeline.words = {
      {"Hello", 700},  {"there.", 1300}, {"How", 5450},    {"are", 5850},  {"you", 6250},
      {"doing", 6650}, {"today", 7050},  {"my", 7450},     {"friend", 7850}, {"?", 8250},
      {"Bye", 8800},   {".", 9200},
  };
  sc.timeline.validate();

  sc.refs = {
      {0, 200, 1500, "Hallo dort."},
      {1, 5200, 8400, "Wie geht es dir heute mein Freund ?"},
      {2, 8500, 9500, "Tschüss ."},
  };

  sc.engine_spec["type"] = "dict";
  sc.engine_spec["map"] = ordered_json{
      {"Hello", "Hallo"}, {"there.", "dort."}, {"How", "Wie"},     {"are", "geht"},
      {"you", "es"},      {"doing", "dir"},    {"today", "heute"}, {"my", "mein"},
      {"friend", "Freund"}, {"?", "?"},        {"Bye", "Tschüss"}, {".", "."},
  };
  sc.engine_spec["lookahead"] = 0;
  return sc;
}

// Ten seconds of dead air: no segments beyond the silence cuts, no words, no
// translations. Useful as a pipeline smoke test.
inline Scenario silence_fixture() {
  Scenario sc;
  sc.name = "silence";
  sc.config = preset("en-de-low");
  add_region(sc.timeline, 0, 10000, 0.0, 20);
  sc.engine_spec["type"] = "identity";
  return sc;
}

}  // namespace detail

// Twenty samples that exercise every cleaning rule: the 24/25-character
// length floor on source and context (code points, not bytes), markup and
// all-capitals drops, "- " collapsing, Latin-in-Chinese detection, and
// lexical-overlap scores on both sides of the 0.6 threshold. Sources and
// targets are built from neutral tokens so each sample's fate is auditable
// by eye.
inline std::vector<CorpusSample> cleaner_corpus() {
  const std::string ctx = "the previous sentence talked about the weather";
  const auto de = LanguagePair::EnDe;
  const auto zh = LanguagePair::EnZh;
  auto s = [](std::string src, std::string tgt, std::string c, LanguagePair lp) {
    return CorpusSample{std::move(src), std::move(tgt), std::move(c), lp};
  };
  return {
      // kept: everything in order
      s("alpha beta gamma delta epsilon zeta eta theta",
        "alpha beta gamma delta epsilon zeta eta theta", ctx, de),
      // dropped: source one code point under the floor
      s("this source has 24 chars", "this source has 24 chars", ctx, de),
      // kept: source exactly at the floor
      s("this source has 25 chars!", "this source has 25 chars!", ctx, de),
      // dropped: context one code point under the floor
      s("alpha beta gamma delta epsilon zeta eta theta",
        "alpha beta gamma delta epsilon zeta eta theta", "a context of 24 chars ok", de),
      // kept: context exactly at the floor
      s("omicron pi rho sigma tau upsilon phi chi psi",
        "omicron pi rho sigma tau upsilon phi chi psi", "a context of 25 chars ok!", de),
      // dropped: 24 code points even though the UTF-8 encoding is 27 bytes
      s("café négocie ses prix dè", "cafe negotiates its prices daily ok", ctx, de),
      // dropped: ellipsis in the source
      s("the speech trailed off into silence...", "die rede verklang", ctx, de),
      // dropped: brackets in the target
      s("the crowd cheers loudly after the speech ends", "[applaus] die menge jubelt laut",
        ctx, de),
      // dropped: parentheses in the source
      s("he paused (quite deliberately) before answering", "er pausierte bevor er antwortete",
        ctx, de),
      // dropped: target is all capital letters
      s("only capital letters appear in the target side", "NUR GROSSBUCHSTABEN HIER", ctx, de),
      // dropped: source is all capital letters
      s("THE ENTIRE SOURCE IS UPPERCASE HERE TODAY", "normal lowercase target text", ctx, de),
      // kept: "- " collapses to a space on both sides
      s("alpha - beta gamma delta epsilon zeta eta theta",
        "alpha - beta gamma delta epsilon zeta eta theta", ctx, de),
      // kept: hyphenated words are left alone
      s("the well-known story was retold again yesterday evening",
        "the well-known story was retold again yesterday evening", ctx, de),
      // dropped: Latin run inside a Chinese target
      s("we drank green tea together this afternoon happily", "我们喝了green tea很开心", ctx, zh),
      // kept: single Latin letters and digits are tolerated in Chinese
      s("terminal B 1430 bus 9 1445 stop 12", "B 站 1430 路 9 号 1445 12", ctx, zh),
      // dropped: zero lexical overlap
      s("alpha beta gamma delta epsilon zeta eta theta", "uno dos tres cuatro cinco seis",
        ctx, de),
      // kept: overlap score exactly at the threshold
      s("alpha beta gamma delta epsilon", "alpha beta gamma sechs sieben", ctx, de),
      // dropped: overlap score below the threshold
      s("alpha beta gamma delta epsilon", "alpha beta vier fünf sechs", ctx, de),
      // kept: overlap is case-insensitive
      s("Alpha Beta Gamma Delta Epsilon", "alpha beta gamma delta epsilon", ctx, de),
      // dropped: the length floor fires before the markup check sees "..."
      s("too short... yes", "zu kurz ja", ctx, de),
  };
}

inline std::vector<std::string> fixture_names() { return {"greetings", "silence"}; }

inline Scenario make_fixture(const std::string& name) {
  if (name == "greetings") return detail::greetings_fixture();
  if (name == "silence") return detail::silence_fixture();
  throw UnknownFixture("unknown fixture '" + name + "' (available: greetings, silence)");
}

// --- scenario directories -------------------------------------------------------

// Layout: scenario.json (name, config, engine, file names), timeline.jsonl
// (one frame per line), words.jsonl, refs.jsonl.
inline void write_scenario(const Scenario& sc, const std::string& dir) {
  namespace fs = std::filesystem;
  fs::create_directories(dir);
  ordered_json manifest;
  manifest["name"] = sc.name;
  manifest["config"] = config_to_json(sc.config);
  manifest["engine"] = sc.engine_spec;
  manifest["files"]["frames"] = "timeline.jsonl";
  manifest["files"]["words"] = "words.jsonl";
  manifest["files"]["refs"] = "refs.jsonl";
  write_jsonl_file((fs::path(dir) / "scenario.json").string(), {manifest});

  std::vector<ordered_json> frames;
  for (const auto& f : sc.timeline.frames) {
    ordered_json j;
    j["duration_ms"] = f.duration_ms;
    j["voice_prob"] = f.voice_prob;
    frames.push_back(std::move(j));
  }
  write_jsonl_file((fs::path(dir) / "timeline.jsonl").string(), frames);

  std::vector<ordered_json> words;
  for (const auto& w : sc.timeline.words) {
    ordered_json j;
    j["text"] = w.text;
    j["end_ms"] = w.end_ms;
    words.push_back(std::move(j));
  }
  write_jsonl_file((fs::path(dir) / "words.jsonl").string(), words);

  std::vector<ordered_json> refs;
  for (const auto& r : sc.refs) refs.push_back(r.to_json());
  write_jsonl_file((fs::path(dir) / "refs.jsonl").string(), refs);
}

inline std::vector<AudioFrame> read_frames_jsonl(const std::string& path) {
  std::vector<AudioFrame> frames;
  for (const auto& j : read_jsonl_file(path)) {
    AudioFrame f;
    f.duration_ms = require_key(j, "duration_ms", "frame").get<std::int64_t>();
    f.voice_prob = require_key(j, "voice_prob", "frame").get<double>();
    frames.push_back(f);
  }
  return frames;
}

inline std::vector<TimedWord> read_words_jsonl(const std::string& path) {
  std::vector<TimedWord> words;
  for (const auto& j : read_jsonl_file(path)) {
    TimedWord w;
    w.text = require_key(j, "text", "word").get<std::string>();
    w.end_ms = require_key(j, "end_ms", "word").get<std::int64_t>();
    words.push_back(std::move(w));
  }
  return words;
}

inline std::vector<SentenceRef> read_refs_jsonl(const std::string& path) {
  std::vector<SentenceRef> refs;
  for (const auto& j : read_jsonl_file(path)) refs.push_back(SentenceRef::from_json(j));
  return refs;
}

inline Scenario load_scenario(const std::string& dir) {
  namespace fs = std::filesystem;
  const auto rows = read_jsonl_file((fs::path(dir) / "scenario.json").string());
  if (rows.size() != 1) throw SchemaError("scenario.json: expected exactly one manifest object");
  const auto& manifest = rows[0];
  Scenario sc;
  sc.name = require_key(manifest, "name", "scenario").get<std::string>();
  sc.config = parse_config(require_key(manifest, "config", "scenario"));
  sc.engine_spec = require_key(manifest, "engine", "scenario");
  const auto& files = require_key(manifest, "files", "scenario");
  sc.timeline.frames = read_frames_jsonl(
      (fs::path(dir) / require_key(files, "frames", "scenario").get<std::string>()).string());
  sc.timeline.words = read_words_jsonl(
      (fs::path(dir) / require_key(files, "words", "scenario").get<std::string>()).string());
  sc.refs = read_refs_jsonl(
      (fs::path(dir) / require_key(files, "refs", "scenario").get<std::string>()).string());
  sc.timeline.validate();
  return sc;
}

}  // namespace simulst
