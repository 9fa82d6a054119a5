#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "simulst/engines.hpp"
#include "simulst/fixtures.hpp"
#include "simulst/metrics.hpp"
#include "simulst/pipeline.hpp"
#include "simulst/sweep.hpp"

using namespace simulst;

namespace {

std::vector<PipelineEvent> run_fixture(const Scenario& sc) {
  OracleAsrEngine asr(sc.timeline.words);
  auto translator = make_translation_engine(sc.engine_spec);
  return run_pipeline(sc.timeline, sc.config, asr, *translator);
}

std::string to_lines(const std::vector<PipelineEvent>& events) {
  std::string out;
  for (const auto& row : events_to_jsonl(events)) out += row.dump() + "\n";
  return out;
}

bool close_rel(double a, double b, double tol = 1e-9) {
  return std::abs(a - b) <= tol * std::max(1.0, std::max(std::abs(a), std::abs(b)));
}

int causal_rank(EventKind k) {
  switch (k) {
    case EventKind::SegmentClosed: return 0;
    case EventKind::HypothesisEmitted: return 1;
    case EventKind::StableCommit: return 2;
    case EventKind::TranslationEmitted: return 3;
    case EventKind::SentenceCompleted: return 4;
  }
  return -1;
}

}  // namespace

TEST_CASE("the greetings run matches its golden log byte for byte") {
  std::ifstream in(GOLDEN_DIR "/greetings_run.jsonl", std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream golden;
  golden << in.rdbuf();

  const auto events = run_fixture(make_fixture("greetings"));
  CHECK(to_lines(events) == golden.str());
}

TEST_CASE("two fresh runs produce identical logs") {
  const auto sc = make_fixture("greetings");
  CHECK(to_lines(run_fixture(sc)) == to_lines(run_fixture(sc)));
}

TEST_CASE("the greetings log replays to the hand-computed evaluation") {
  const auto sc = make_fixture("greetings");
  const auto events = run_fixture(sc);
  CHECK(events.size() == 85);

  const auto log = replay_log(events);
  CHECK(log.source_duration_ms == 10000);
  CHECK(log.completed_translations ==
        std::vector<std::string>{"Hallo dort.", "Wie geht es dir heute mein Freund ?",
                                 "Tschüss ."});

  const std::vector<EmittedToken> want{
      {"Hallo", 5600, 0}, {"dort.", 5600, 0},  {"Wie", 6600, 1},  {"geht", 6600, 1},
      {"es", 6600, 1},    {"dir", 7600, 1},    {"heute", 7600, 1}, {"mein", 7600, 1},
      {"Freund", 9100, 1}, {"?", 9100, 1},     {"Tschüss", 10000, 2}, {".", 10000, 2},
  };
  REQUIRE(log.tokens.size() == want.size());
  for (std::size_t i = 0; i < want.size(); ++i) {
    CAPTURE(i);
    CHECK(log.tokens[i].text == want[i].text);
    CHECK(log.tokens[i].time_ms == want[i].time_ms);
    CHECK(log.tokens[i].sentence_index == want[i].sentence_index);
  }

  // Sentence lags: 5400 for the long wait through the silence, 6900/7 for the
  // second sentence, 1500 for the tail; their mean is 18400/7.
  const auto latency = stream_laal(log, sc.refs, LatencyUnit::Word);
  REQUIRE(latency.per_sentence.size() == 3);
  CHECK(close_rel(latency.per_sentence[0].laal_ms, 5400.0));
  CHECK(close_rel(latency.per_sentence[1].laal_ms, 6900.0 / 7.0));
  CHECK(close_rel(latency.per_sentence[2].laal_ms, 1500.0));
  CHECK(close_rel(latency.stream_laal_ms, 18400.0 / 7.0));

  std::vector<std::string> refs;
  for (const auto& r : sc.refs) refs.push_back(r.reference);
  CHECK(corpus_bleu(log.completed_translations, refs, BleuUnit::Word13a).bleu == 100.0);
}

TEST_CASE("events at one timestamp keep their causal order") {
  for (const char* name : {"greetings", "silence"}) {
    CAPTURE(name);
    const auto events = run_fixture(make_fixture(name));
    for (std::size_t i = 1; i < events.size(); ++i) {
      CHECK(events[i].time_ms >= events[i - 1].time_ms);
      if (events[i].time_ms == events[i - 1].time_ms)
        CHECK(causal_rank(events[i].kind) >= causal_rank(events[i - 1].kind));
    }
  }
}

TEST_CASE("an identity engine reproduces the stable transcript") {
  auto sc = make_fixture("greetings");
  sc.engine_spec = ordered_json{{"type", "identity"}};
  const auto events = run_fixture(sc);

  std::vector<std::string> committed, emitted;
  for (const auto& e : events) {
    if (e.kind == EventKind::StableCommit)
      committed.insert(committed.end(), e.words.begin(), e.words.end());
    if (e.kind == EventKind::TranslationEmitted) emitted.push_back(e.token);
    if (e.kind == EventKind::SentenceCompleted) {
      std::string joined;
      for (const auto& w : e.source_words) {
        if (!joined.empty()) joined += ' ';
        joined += w;
      }
      CHECK(e.translation == joined);
    }
  }
  CHECK(emitted == committed);
  CHECK(committed == std::vector<std::string>{"Hello", "there.", "How", "are", "you", "doing",
                                              "today", "my", "friend", "?", "Bye", "."});
}

TEST_CASE("dead air yields segments and nothing else") {
  const auto events = run_fixture(make_fixture("silence"));
  CHECK(events.size() == 84);
  for (const auto& e : events) CHECK(e.kind == EventKind::SegmentClosed);
  const auto log = replay_log(events);
  CHECK(log.tokens.empty());
  CHECK(log.completed_translations.empty());
  CHECK(log.source_duration_ms == 10000);
}

TEST_CASE("larger chunks trade latency for nothing on a clean fixture") {
  const auto sc = make_fixture("greetings");
  SweepGrid grid;
  grid.min_chunk_size_words = {1, 3, 5, 7};
  const auto rows = run_sweep(sc, grid);
  REQUIRE(rows.size() == 4);

  const double want[4] = {1940.0 / 3.0, 18400.0 / 7.0, 24400.0 / 9.0, 8525.0 / 3.0};
  const char* bands[4] = {"low", "high", "high", "high"};
  for (std::size_t k = 0; k < rows.size(); ++k) {
    CAPTURE(k);
    CHECK(rows[k].error.empty());
    CHECK(close_rel(rows[k].stream_laal_ms, want[k]));
    CHECK(rows[k].bleu == 100.0);
    CHECK(rows[k].sentences == 3);
    CHECK(rows[k].regime_band == bands[k]);
    if (k) CHECK(rows[k].stream_laal_ms > rows[k - 1].stream_laal_ms);
  }
}

TEST_CASE("parallel sweeps match the serial order") {
  const auto sc = make_fixture("greetings");
  SweepGrid grid;
  grid.max_segment_ms = {400, 500};
  grid.min_chunk_size_words = {1, 3};
  const auto serial = run_sweep(sc, grid, 1);
  const auto parallel = run_sweep(sc, grid, 3);
  REQUIRE(serial.size() == 4);
  REQUIRE(parallel.size() == 4);
  for (std::size_t k = 0; k < serial.size(); ++k) {
    CAPTURE(k);
    CHECK(serial[k].to_json().dump() == parallel[k].to_json().dump());
  }
  CHECK_THROWS_AS(run_sweep(sc, grid, 0), ConfigError);
}

TEST_CASE("a failing grid point is recorded without stopping the sweep") {
  const auto sc = make_fixture("greetings");
  SweepGrid grid;
  grid.voice_threshold = {0.5, 1.5};
  const auto rows = run_sweep(sc, grid);
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].error.empty());
  CHECK(rows[1].error.find("voice_threshold") != std::string::npos);
  CHECK(rows[1].to_json().contains("error"));
  CHECK_FALSE(rows[0].to_json().contains("error"));
}

TEST_CASE("latency bands split at the regime thresholds") {
  const LatencyRegime regime{2000, 4000};
  CHECK(regime_band(1999.0, regime) == "low");
  CHECK(regime_band(2000.0, regime) == "low");
  CHECK(regime_band(2000.5, regime) == "high");
  CHECK(regime_band(4000.0, regime) == "high");
  CHECK(regime_band(4000.5, regime) == "above");

  CHECK(latency_unit_for(LanguagePair::EnDe) == LatencyUnit::Word);
  CHECK(latency_unit_for(LanguagePair::EnZh) == LatencyUnit::Char);
  CHECK(bleu_unit_for(LanguagePair::EnDe) == BleuUnit::Word13a);
  CHECK(bleu_unit_for(LanguagePair::EnZh) == BleuUnit::Char);
}
