#include <catch2/catch_amalgamated.hpp>

#include "simulst/config.hpp"
#include "simulst/segmenter.hpp"
#include "simulst/util.hpp"

using namespace simulst;

namespace {

std::vector<SpeechSegment> run_segmenter(const SegmenterConfig& cfg,
                                         const std::vector<AudioFrame>& frames) {
  VadSegmenter segmenter(cfg);
  std::vector<SpeechSegment> segments;
  for (const auto& f : frames)
    for (auto& seg : segmenter.push_frame(f.duration_ms, f.voice_prob))
      segments.push_back(seg);
  if (auto last = segmenter.flush()) segments.push_back(*last);
  return segments;
}

}  // namespace

TEST_CASE("unvoiced run cuts at the frame where the run exceeds the maximum") {
  SegmenterConfig cfg{100, 0.5, 500};
  VadSegmenter segmenter(cfg);
  std::vector<SpeechSegment> segments;
  for (double prob : {0.9, 0.9, 0.2, 0.2, 0.2})
    for (auto& seg : segmenter.push_frame(50, prob)) segments.push_back(seg);
  REQUIRE(segments.size() == 1);
  CHECK(segments[0].index == 0);
  CHECK(segments[0].start_ms == 0);
  CHECK(segments[0].end_ms == 250);
  CHECK(segments[0].cut_reason == CutReason::UnvoicedRun);
}

TEST_CASE("fully voiced audio cuts at exact max-duration boundaries") {
  SegmenterConfig cfg{100, 0.5, 500};
  std::vector<AudioFrame> frames(30, {50, 1.0});  // 1500 ms
  const auto segments = run_segmenter(cfg, frames);
  REQUIRE(segments.size() == 3);
  for (std::size_t k = 0; k < 3; ++k) {
    CHECK(segments[k].start_ms == static_cast<std::int64_t>(k) * 500);
    CHECK(segments[k].end_ms == static_cast<std::int64_t>(k + 1) * 500);
    CHECK(segments[k].cut_reason == CutReason::MaxDuration);
  }
}

TEST_CASE("a run exactly equal to the maximum unvoiced duration does not cut") {
  SegmenterConfig cfg{100, 0.5, 500};
  VadSegmenter segmenter(cfg);
  CHECK(segmenter.push_frame(50, 0.2).empty());
  CHECK(segmenter.push_frame(50, 0.2).empty());  // run = 100, not > 100
  const auto cut = segmenter.push_frame(50, 0.2);  // run = 150 > 100
  REQUIRE(cut.size() == 1);
  CHECK(cut[0].end_ms == 150);
  CHECK(cut[0].cut_reason == CutReason::UnvoicedRun);
}

TEST_CASE("voice probability equal to the threshold counts as voiced") {
  SegmenterConfig cfg{100, 0.5, 10000};
  VadSegmenter segmenter(cfg);
  for (int k = 0; k < 40; ++k) CHECK(segmenter.push_frame(50, 0.5).empty());
}

TEST_CASE("flush emits the open segment once and is idempotent") {
  SegmenterConfig cfg{100, 0.5, 500};
  VadSegmenter segmenter(cfg);

  SECTION("nothing pushed") { CHECK_FALSE(segmenter.flush().has_value()); }

  SECTION("open segment of 120 ms") {
    CHECK(segmenter.push_frame(120, 1.0).empty());
    const auto seg = segmenter.flush();
    REQUIRE(seg.has_value());
    CHECK(seg->start_ms == 0);
    CHECK(seg->end_ms == 120);
    CHECK(seg->cut_reason == CutReason::EndOfStream);
    CHECK_FALSE(segmenter.flush().has_value());
  }
}

TEST_CASE("one oversized frame splits into several max-duration segments") {
  SegmenterConfig cfg{100, 0.5, 500};
  VadSegmenter segmenter(cfg);
  const auto segments = segmenter.push_frame(1700, 1.0);
  REQUIRE(segments.size() == 3);
  CHECK(segments[2].end_ms == 1500);
  const auto tail = segmenter.flush();
  REQUIRE(tail.has_value());
  CHECK(tail->start_ms == 1500);
  CHECK(tail->end_ms == 1700);
}

TEST_CASE("unvoiced-run cut takes precedence when both rules fire on one slice") {
  SegmenterConfig cfg{100, 0.5, 200};
  // One 200 ms silent frame: the run (200 > 100) and the cap (200 >= 200)
  // trip on the same slice; the unvoiced-run reason must win.
  VadSegmenter coarse(cfg);
  const auto tied = coarse.push_frame(200, 0.0);
  REQUIRE(tied.size() == 1);
  CHECK(tied[0].end_ms == 200);
  CHECK(tied[0].cut_reason == CutReason::UnvoicedRun);

  // The same silence in 20 ms frames cuts as soon as the run passes 100 ms,
  // well before the cap.
  VadSegmenter fine(cfg);
  std::vector<SpeechSegment> closed;
  for (int k = 0; k < 10; ++k)
    for (const auto& seg : fine.push_frame(20, 0.0)) closed.push_back(seg);
  REQUIRE(closed.size() == 1);
  CHECK(closed[0].end_ms == 120);
  CHECK(closed[0].cut_reason == CutReason::UnvoicedRun);
}

TEST_CASE("segmenter config validation") {
  CHECK_THROWS_AS((SegmenterConfig{-1, 0.5, 500}.validate()), ConfigError);
  CHECK_THROWS_AS((SegmenterConfig{100, 1.5, 500}.validate()), ConfigError);
  CHECK_THROWS_AS((SegmenterConfig{100, -0.1, 500}.validate()), ConfigError);
  CHECK_THROWS_AS((SegmenterConfig{100, 0.5, 0}.validate()), ConfigError);
  CHECK_NOTHROW((SegmenterConfig{0, 0.0, 1}.validate()));
}

// Independent verification of the three segment invariants over randomized
// probability streams, for every preset.
TEST_CASE("randomized property suite: duration cap, unvoiced-run evidence, partition") {
  for (const auto& name : preset_names()) {
    const auto cfg = preset(name).segmenter;
    for (int trial = 0; trial < 1000; ++trial) {
      StableRng rng(static_cast<std::uint64_t>(trial) * 7919 + name.size());
      std::vector<AudioFrame> frames;
      const int n = static_cast<int>(rng.next_int(5, 60));
      for (int k = 0; k < n; ++k) {
        const bool big = rng.next_bool(0.05);
        frames.push_back({rng.next_int(big ? 600 : 10, big ? 2200 : 60), rng.next_u01()});
      }
      std::int64_t total = 0;
      for (const auto& f : frames) total += f.duration_ms;

      const auto segments = run_segmenter(cfg, frames);

      // Partition: contiguous, gap-free cover of [0, total).
      std::int64_t cursor = 0;
      for (const auto& seg : segments) {
        REQUIRE(seg.start_ms == cursor);
        REQUIRE(seg.end_ms > seg.start_ms);
        cursor = seg.end_ms;
      }
      REQUIRE(cursor == total);

      // Duration cap, exact for max-duration cuts.
      for (const auto& seg : segments) {
        REQUIRE(seg.end_ms - seg.start_ms <= cfg.max_segment_ms);
        if (seg.cut_reason == CutReason::MaxDuration)
          REQUIRE(seg.end_ms - seg.start_ms == cfg.max_segment_ms);
      }

      // Every unvoiced-run cut is preceded by a contiguous sub-threshold run
      // longer than the maximum, reconstructed from the raw frames. The run
      // cannot start before the previous cut (the accumulator resets there).
      for (std::size_t k = 0; k < segments.size(); ++k) {
        if (segments[k].cut_reason != CutReason::UnvoicedRun) continue;
        const std::int64_t cut = segments[k].end_ms;
        std::int64_t last_voiced_end = 0;  // end of the latest voiced audio before the cut
        std::int64_t t = 0;
        for (const auto& f : frames) {
          const std::int64_t begin = t, end = t + f.duration_ms;
          t = end;
          if (begin >= cut) break;
          if (f.voice_prob >= cfg.voice_threshold)
            last_voiced_end = std::max(last_voiced_end, std::min(end, cut));
        }
        const std::int64_t run_start = std::max(last_voiced_end, segments[k].start_ms);
        REQUIRE(cut - run_start > cfg.max_unvoiced_ms);
      }
    }
  }
}
