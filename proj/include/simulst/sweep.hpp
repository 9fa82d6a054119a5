#pragma once

#include <future>
#include <string>
#include <vector>

#include "simulst/engines.hpp"
#include "simulst/fixtures.hpp"
#include "simulst/metrics.hpp"
#include "simulst/pipeline.hpp"

namespace simulst {

// Parameter grid for the latency/quality sweep. Empty axes fall back to the
// scenario's configured value, so a one-axis sweep stays one-dimensional.
struct SweepGrid {
  std::vector<std::int64_t> max_unvoiced_ms;
  std::vector<double> voice_threshold;
  std::vector<std::int64_t> max_segment_ms;
  std::vector<int> min_chunk_size_words;
};

struct SweepRow {
  PipelineConfig config;
  double stream_laal_ms = 0.0;
  double bleu = 0.0;
  int sentences = 0;
  std::string regime_band;  // "low", "high", or "above"
  std::string error;        // non-empty when this point failed

  ordered_json to_json() const {
    ordered_json j;
    j["config"] = config_to_json(config);
    if (error.empty()) {
      j["stream_laal_ms"] = stream_laal_ms;
      j["bleu"] = bleu;
      j["sentences"] = sentences;
      j["regime_band"] = regime_band;
    } else {
      j["error"] = error;
    }
    return j;
  }
};

inline std::string regime_band(double laal_ms, const LatencyRegime& regime) {
  if (laal_ms <= static_cast<double>(regime.low_ms)) return "low";
  if (laal_ms <= static_cast<double>(regime.high_ms)) return "high";
  return "above";
}

inline LatencyUnit latency_unit_for(LanguagePair lp) {
  return lp == LanguagePair::EnZh ? LatencyUnit::Char : LatencyUnit::Word;
}

inline BleuUnit bleu_unit_for(LanguagePair lp) {
  return lp == LanguagePair::EnZh ? BleuUnit::Char : BleuUnit::Word13a;
}

// Run one configuration of the scenario end to end and score it.
inline SweepRow evaluate_point(const Scenario& sc, const PipelineConfig& cfg) {
  SweepRow row;
  row.config = cfg;
  try {
    row.config.validate();
    OracleAsrEngine asr(sc.timeline.words);
    auto translator = make_translation_engine(sc.engine_spec);
    const auto events = run_pipeline(sc.timeline, row.config, asr, *translator);
    const auto log = replay_log(events);
    const auto latency = stream_laal(log, sc.refs, latency_unit_for(cfg.language_pair));
    row.stream_laal_ms = latency.stream_laal_ms;
    row.regime_band = regime_band(latency.stream_laal_ms, cfg.regime);
    std::vector<std::string> hyps, refs;
    for (const auto& r : sc.refs) refs.push_back(r.reference);
    for (const auto& t : log.completed_translations) hyps.push_back(t);
    row.bleu = corpus_bleu(hyps, refs, bleu_unit_for(cfg.language_pair)).bleu;
    row.sentences = static_cast<int>(log.completed_translations.size());
  } catch (const std::exception& e) {
    row.error = e.what();
  }
  return row;
}

// Cartesian product over the grid; a failure at one point is recorded in its
// row and the sweep moves on. Points are independent, so jobs > 1 evaluates
// them concurrently; row order follows the grid regardless of jobs.
inline std::vector<SweepRow> run_sweep(const Scenario& sc, const SweepGrid& grid, int jobs = 1) {
  const auto or_default = [](auto axis, auto fallback) {
    if (axis.empty()) axis.push_back(fallback);
    return axis;
  };
  const auto muds = or_default(grid.max_unvoiced_ms, sc.config.segmenter.max_unvoiced_ms);
  const auto vpts = or_default(grid.voice_threshold, sc.config.segmenter.voice_threshold);
  const auto msds = or_default(grid.max_segment_ms, sc.config.segmenter.max_segment_ms);
  const auto mcss = or_default(grid.min_chunk_size_words, sc.config.agent.min_chunk_size_words);

  std::vector<PipelineConfig> points;
  for (const auto mud : muds)
    for (const auto vpt : vpts)
      for (const auto msd : msds)
        for (const auto mcs : mcss) {
          PipelineConfig cfg = sc.config;
          cfg.segmenter.max_unvoiced_ms = mud;
          cfg.segmenter.voice_threshold = vpt;
          cfg.segmenter.max_segment_ms = msd;
          cfg.agent.min_chunk_size_words = mcs;
          points.push_back(cfg);
        }

  std::vector<SweepRow> rows(points.size());
  if (jobs < 1) throw ConfigError("sweep jobs: must be >= 1");
  if (jobs == 1) {
    for (std::size_t k = 0; k < points.size(); ++k) rows[k] = evaluate_point(sc, points[k]);
    return rows;
  }
  std::size_t next = 0;
  while (next < points.size()) {
    std::vector<std::future<SweepRow>> batch;
    for (int j = 0; j < jobs && next < points.size(); ++j, ++next)
      batch.push_back(std::async(std::launch::async,
                                 [&sc, cfg = points[next]] { return evaluate_point(sc, cfg); }));
    for (std::size_t j = 0; j < batch.size(); ++j)
      rows[next - batch.size() + j] = batch[j].get();
  }
  return rows;
}

}  // namespace simulst
