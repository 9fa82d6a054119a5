#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "simulst/agent.hpp"
#include "simulst/errors.hpp"
#include "simulst/language.hpp"
#include "simulst/segmenter.hpp"
#include "simulst/stabilizer.hpp"
#include "simulst/util.hpp"

namespace simulst {

// Reporting bands for latency: a run counts as low-latency when stream LAAL
// stays under low_ms, high-latency under high_ms.
struct LatencyRegime {
  std::int64_t low_ms = 0;
  std::int64_t high_ms = 0;
};

inline LatencyRegime regime_for(LanguagePair lp) {
  return lp == LanguagePair::EnDe ? LatencyRegime{2000, 4000} : LatencyRegime{2500, 4000};
}

struct PipelineConfig {
  LanguagePair language_pair = LanguagePair::EnDe;
  SegmenterConfig segmenter;
  StabilizerConfig stabilizer;
  AgentConfig agent;
  LatencyRegime regime = regime_for(LanguagePair::EnDe);
  std::uint64_t seed = 7;

  void validate() const {
    segmenter.validate();
    stabilizer.validate();
    agent.validate();
    if (agent.language_pair != language_pair)
      throw ConfigError("agent.language_pair: differs from top-level language_pair");
    const auto expected = regime_for(language_pair);
    if (regime.low_ms != expected.low_ms || regime.high_ms != expected.high_ms)
      throw ConfigError("regime: thresholds for " + std::string(to_string(language_pair)) +
                        " must be low_ms=" + std::to_string(expected.low_ms) +
                        ", high_ms=" + std::to_string(expected.high_ms));
  }
};

// Tuned operating points, selectable by name everywhere a config is accepted.
inline PipelineConfig preset(const std::string& name) {
  PipelineConfig c;
  auto fill = [&c](LanguagePair lp, double vpt, std::int64_t msd, int mcs) {
    c.language_pair = lp;
    c.agent.language_pair = lp;
    c.segmenter.max_unvoiced_ms = 100;
    c.segmenter.voice_threshold = vpt;
    c.segmenter.max_segment_ms = msd;
    c.agent.min_chunk_size_words = mcs;
    c.regime = regime_for(lp);
  };
  if (name == "en-de-low")
    fill(LanguagePair::EnDe, 0.5, 500, 3);
  else if (name == "en-de-high")
    fill(LanguagePair::EnDe, 0.3, 1000, 7);
  else if (name == "en-zh-low")
    fill(LanguagePair::EnZh, 0.5, 500, 5);
  else if (name == "en-zh-high")
    fill(LanguagePair::EnZh, 0.5, 1500, 7);
  else
    throw ConfigError("unknown preset '" + name +
                      "' (expected en-de-low, en-de-high, en-zh-low, en-zh-high)");
  return c;
}

inline std::vector<std::string> preset_names() {
  return {"en-de-low", "en-de-high", "en-zh-low", "en-zh-high"};
}

namespace detail {

class ConfigReader {
 public:
  ConfigReader(const ordered_json& j, std::string path, std::vector<std::string>& errors)
      : j_(j), path_(std::move(path)), errors_(errors) {
    if (!j_.is_object()) errors_.push_back(path_ + ": expected an object");
  }

  template <typename T>
  void read(const char* key, T& out) {
    if (!j_.is_object() || !j_.contains(key)) return;
    seen_.push_back(key);
    try {
      out = j_.at(key).get<T>();
    } catch (const std::exception&) {
      errors_.push_back(path_ + "." + key + ": wrong type");
    }
  }

  const ordered_json* child(const char* key) {
    if (!j_.is_object() || !j_.contains(key)) return nullptr;
    seen_.push_back(key);
    return &j_.at(key);
  }

  void finish() {
    if (!j_.is_object()) return;
    for (const auto& [key, value] : j_.items()) {
      (void)value;
      bool known = false;
      for (const auto& s : seen_)
        if (s == key) known = true;
      if (!known) errors_.push_back(path_ + "." + key + ": unknown key");
    }
  }

 private:
  const ordered_json& j_;
  std::string path_;
  std::vector<std::string>& errors_;
  std::vector<std::string> seen_;
};

}  // namespace detail

// Strict loader: unknown keys are rejected, every violation is reported with
// its field path, and all invariants are checked after defaults are applied.
// The optional "preset" key seeds the config before other keys override it.
inline PipelineConfig parse_config(const ordered_json& j) {
  std::vector<std::string> errors;
  PipelineConfig c;
  detail::ConfigReader top(j, "config", errors);
  std::string preset_name;
  top.read("preset", preset_name);
  if (!preset_name.empty()) {
    try {
      c = preset(preset_name);
    } catch (const ConfigError& e) {
      errors.push_back(std::string("config.preset: ") + e.what());
    }
  }
  std::string pair_name;
  top.read("language_pair", pair_name);
  if (!pair_name.empty()) {
    try {
      c.language_pair = language_pair_from_string(pair_name);
      c.agent.language_pair = c.language_pair;
      c.regime = regime_for(c.language_pair);
    } catch (const ConfigError& e) {
      errors.push_back(std::string("config.language_pair: ") + e.what());
    }
  }
  top.read("seed", c.seed);
  if (const auto* seg = top.child("segmenter")) {
    detail::ConfigReader r(*seg, "config.segmenter", errors);
    r.read("max_unvoiced_ms", c.segmenter.max_unvoiced_ms);
    r.read("voice_threshold", c.segmenter.voice_threshold);
    r.read("max_segment_ms", c.segmenter.max_segment_ms);
    r.finish();
  }
  if (const auto* st = top.child("stabilizer")) {
    detail::ConfigReader r(*st, "config.stabilizer", errors);
    r.read("agreement_window", c.stabilizer.agreement_window);
    r.read("cutoff_threshold_words", c.stabilizer.cutoff_threshold_words);
    r.finish();
  }
  if (const auto* ag = top.child("agent")) {
    detail::ConfigReader r(*ag, "config.agent", errors);
    r.read("min_chunk_size_words", c.agent.min_chunk_size_words);
    r.read("strict_chunk_trigger", c.agent.strict_chunk_trigger);
    r.read("memory_bank_translation", c.agent.memory_bank_translation);
    r.read("generation_budget", c.agent.generation_budget);
    r.finish();
  }
  if (const auto* rg = top.child("regime")) {
    detail::ConfigReader r(*rg, "config.regime", errors);
    r.read("low_ms", c.regime.low_ms);
    r.read("high_ms", c.regime.high_ms);
    r.finish();
  }
  top.finish();
  if (errors.empty()) {
    try {
      c.validate();
    } catch (const ConfigError& e) {
      errors.push_back(std::string("config: ") + e.what());
    }
  }
  if (!errors.empty()) {
    std::string msg = "invalid config:";
    for (const auto& e : errors) msg += "\n  " + e;
    throw ConfigError(msg);
  }
  return c;
}

inline ordered_json config_to_json(const PipelineConfig& c) {
  ordered_json j;
  j["language_pair"] = to_string(c.language_pair);
  j["seed"] = c.seed;
  j["segmenter"]["max_unvoiced_ms"] = c.segmenter.max_unvoiced_ms;
  j["segmenter"]["voice_threshold"] = c.segmenter.voice_threshold;
  j["segmenter"]["max_segment_ms"] = c.segmenter.max_segment_ms;
  j["stabilizer"]["agreement_window"] = c.stabilizer.agreement_window;
  j["stabilizer"]["cutoff_threshold_words"] = c.stabilizer.cutoff_threshold_words;
  j["agent"]["min_chunk_size_words"] = c.agent.min_chunk_size_words;
  j["agent"]["strict_chunk_trigger"] = c.agent.strict_chunk_trigger;
  j["agent"]["memory_bank_translation"] = c.agent.memory_bank_translation;
  j["agent"]["generation_budget"] = c.agent.generation_budget;
  j["regime"]["low_ms"] = c.regime.low_ms;
  j["regime"]["high_ms"] = c.regime.high_ms;
  return j;
}

}  // namespace simulst
