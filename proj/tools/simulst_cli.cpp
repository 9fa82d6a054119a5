// simulst: deterministic simultaneous speech-translation pipeline tools.
//
// Machine-readable output (JSON-lines) goes to --output when given, stdout
// otherwise. Human-readable tables go to stdout when the machine output is
// redirected to a file, stderr otherwise, so pipes stay clean. Diagnostics
// always go to stderr, and every error exits nonzero.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "simulst/cleaner.hpp"
#include "simulst/config.hpp"
#include "simulst/engines.hpp"
#include "simulst/errors.hpp"
#include "simulst/events.hpp"
#include "simulst/fixtures.hpp"
#include "simulst/metrics.hpp"
#include "simulst/pipeline.hpp"
#include "simulst/prompt.hpp"
#include "simulst/sweep.hpp"
#include "simulst/util.hpp"

namespace {

using simulst::ordered_json;

struct GlobalOpts {
  std::string config_path;
  std::optional<std::int64_t> seed;
  std::string output_path;
};

struct Sinks {
  std::ofstream file;
  bool to_file = false;

  explicit Sinks(const std::string& output_path) {
    if (output_path.empty()) return;
    file.open(output_path);
    if (!file) throw simulst::ConfigError("cannot open output file '" + output_path + "'");
    to_file = true;
  }

  std::ostream& machine() { return to_file ? static_cast<std::ostream&>(file) : std::cout; }
  std::ostream& human() { return to_file ? std::cout : std::cerr; }
};

simulst::PipelineConfig load_config(const GlobalOpts& g) {
  simulst::PipelineConfig cfg = simulst::preset("en-de-low");
  if (!g.config_path.empty()) {
    std::ifstream in(g.config_path);
    if (!in) throw simulst::ConfigError("cannot open config file '" + g.config_path + "'");
    ordered_json j;
    try {
      in >> j;
    } catch (const std::exception& e) {
      throw simulst::ConfigError("config file '" + g.config_path + "': " + e.what());
    }
    cfg = simulst::parse_config(j);
  }
  if (g.seed) cfg.seed = *g.seed;
  return cfg;
}

// Right-aligns numeric-looking cells, left-aligns the rest.
void print_table(std::ostream& out, const std::vector<std::string>& headers,
                 const std::vector<std::vector<std::string>>& rows) {
  std::vector<std::size_t> widths(headers.size());
  for (std::size_t c = 0; c < headers.size(); ++c) widths[c] = headers[c].size();
  for (const auto& row : rows)
    for (std::size_t c = 0; c < row.size() && c < widths.size(); ++c)
      widths[c] = std::max(widths[c], row[c].size());
  auto is_numeric = [](const std::string& s) {
    if (s.empty()) return false;
    for (char ch : s)
      if (!(std::isdigit(static_cast<unsigned char>(ch)) || ch == '.' || ch == '-' || ch == '+'))
        return false;
    return true;
  };
  auto emit = [&](const std::vector<std::string>& row) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c) out << "  ";
      const auto pad = widths[c] - std::min(widths[c], row[c].size());
      if (is_numeric(row[c])) out << std::string(pad, ' ') << row[c];
      else out << row[c] << std::string(pad, ' ');
    }
    out << "\n";
  };
  emit(headers);
  std::vector<std::string> rule;
  for (auto w : widths) rule.push_back(std::string(w, '-'));
  emit(rule);
  for (const auto& row : rows) emit(row);
}

std::string fmt(double v, int digits = 4) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", digits, v);
  return buf;
}

// "identity" | "dict:<path>" | "scripted:<path>" -> engine spec object.
ordered_json engine_spec_from_flag(const std::string& flag) {
  if (flag == "identity") {
    ordered_json spec;
    spec["type"] = "identity";
    return spec;
  }
  if (simulst::starts_with(flag, "dict:")) {
    const auto path = flag.substr(5);
    std::ifstream in(path);
    if (!in) throw simulst::ConfigError("cannot open dictionary file '" + path + "'");
    ordered_json j;
    in >> j;
    if (j.contains("type")) return j;  // full engine spec
    ordered_json spec;
    spec["type"] = "dict";
    spec["map"] = j.contains("map") ? j["map"] : j;
    spec["lookahead"] = j.contains("lookahead") ? j["lookahead"].get<int>() : 0;
    return spec;
  }
  if (simulst::starts_with(flag, "scripted:")) {
    const auto path = flag.substr(9);
    ordered_json outputs = ordered_json::array();
    for (const auto& row : simulst::read_jsonl_file(path))
      outputs.push_back(row.is_array() ? row : simulst::require_key(row, "tokens", "script row"));
    ordered_json spec;
    spec["type"] = "scripted";
    spec["outputs"] = outputs;
    return spec;
  }
  throw simulst::ConfigError("unknown engine '" + flag +
                             "' (expected identity, dict:<path>, or scripted:<path>)");
}

simulst::Scenario resolve_scenario(const std::string& dir, const std::string& fixture) {
  if (!dir.empty() && !fixture.empty())
    throw simulst::ConfigError("pass either --scenario or --fixture, not both");
  if (!dir.empty()) return simulst::load_scenario(dir);
  if (!fixture.empty()) return simulst::make_fixture(fixture);
  throw simulst::ConfigError("one of --scenario or --fixture is required");
}

std::vector<std::string> read_lines(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw simulst::ConfigError("cannot open file '" + path + "'");
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(line);
  }
  return lines;
}

template <typename T>
std::vector<T> parse_grid(const std::string& csv) {
  std::vector<T> values;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = simulst::trim(item);
    if (item.empty()) continue;
    try {
      if constexpr (std::is_same_v<T, double>) values.push_back(std::stod(item));
      else values.push_back(static_cast<T>(std::stoll(item)));
    } catch (const std::exception&) {
      throw simulst::ConfigError("bad grid value '" + item + "'");
    }
  }
  return values;
}

// --- subcommands -----------------------------------------------------------------

int cmd_segment(const GlobalOpts& g, const std::string& input,
                std::optional<std::int64_t> mud, std::optional<double> vpt,
                std::optional<std::int64_t> msd) {
  auto cfg = load_config(g).segmenter;
  if (mud) cfg.max_unvoiced_ms = *mud;
  if (vpt) cfg.voice_threshold = *vpt;
  if (msd) cfg.max_segment_ms = *msd;
  cfg.validate();
  const auto frames = simulst::read_frames_jsonl(input);
  simulst::VadSegmenter segmenter(cfg);
  std::vector<ordered_json> rows;
  for (const auto& f : frames)
    for (const auto& seg : segmenter.push_frame(f.duration_ms, f.voice_prob))
      rows.push_back(seg.to_json());
  if (const auto last = segmenter.flush()) rows.push_back(last->to_json());
  Sinks sinks(g.output_path);
  simulst::write_jsonl(sinks.machine(), rows);
  return 0;
}

int cmd_transcribe_sim(const GlobalOpts& g, const std::string& input, int window, int cutoff) {
  simulst::StabilizerConfig cfg;
  cfg.agreement_window = window;
  cfg.cutoff_threshold_words = cutoff;
  simulst::HypothesisStabilizer stabilizer(cfg);

  struct TraceRow {
    std::int64_t time = 0;
    std::int64_t segment = 0;
    std::vector<simulst::HypothesisWord> words;
  };
  std::vector<TraceRow> trace;
  for (const auto& j : simulst::read_jsonl_file(input)) {
    TraceRow row;
    row.time = simulst::require_key(j, "interval_end_ms", "asr trace").get<std::int64_t>();
    if (j.contains("segment_index")) row.segment = j["segment_index"].get<std::int64_t>();
    const auto& words = simulst::require_key(j, "words", "asr trace");
    std::vector<std::int64_t> ends;
    if (j.contains("word_end_ms")) ends = j["word_end_ms"].get<std::vector<std::int64_t>>();
    if (!ends.empty() && ends.size() != words.size())
      throw simulst::SchemaError("asr trace: word_end_ms length differs from words");
    for (std::size_t k = 0; k < words.size(); ++k)
      row.words.push_back({words[k].get<std::string>(), ends.empty() ? row.time : ends[k]});
    if (!trace.empty() && (row.time < trace.back().time || row.segment < trace.back().segment))
      throw simulst::OrderError("asr trace: rows must be ordered by time and segment");
    trace.push_back(std::move(row));
  }

  std::vector<ordered_json> out;
  std::int64_t open_segment = trace.empty() ? 0 : trace.front().segment;
  std::int64_t last_time = 0;
  for (const auto& row : trace) {
    if (row.segment != open_segment) {
      const auto committed = stabilizer.close_segment(last_time);
      if (!committed.empty())
        out.push_back(
            simulst::PipelineEvent::stable_commit(last_time, open_segment, committed).to_json());
      open_segment = row.segment;
    }
    const auto committed = stabilizer.step(row.words, row.time);
    if (!committed.empty())
      out.push_back(
          simulst::PipelineEvent::stable_commit(row.time, row.segment, committed).to_json());
    last_time = row.time;
  }
  const auto committed = stabilizer.close_segment(last_time);
  if (!committed.empty())
    out.push_back(
        simulst::PipelineEvent::stable_commit(last_time, open_segment, committed).to_json());

  Sinks sinks(g.output_path);
  simulst::write_jsonl(sinks.machine(), out);
  return 0;
}

int cmd_translate_sim(const GlobalOpts& g, const std::string& input, std::optional<int> mcs,
                      const std::string& engine_flag) {
  auto cfg = load_config(g);
  if (mcs) cfg.agent.min_chunk_size_words = *mcs;
  cfg.agent.validate();
  const auto spec = engine_spec_from_flag(engine_flag);
  auto engine = simulst::make_translation_engine(spec);
  simulst::TranslationAgent agent(cfg.agent, *engine);

  std::vector<ordered_json> out;
  std::int64_t now = 0;
  auto emit = [&](const std::vector<simulst::AgentEvent>& events) {
    for (const auto& ev : events) {
      if (ev.kind == simulst::AgentEvent::Kind::Translation) {
        for (const auto& token : ev.tokens)
          out.push_back(
              simulst::PipelineEvent::translation_token(now, ev.sentence_index, token).to_json());
      } else {
        out.push_back(simulst::PipelineEvent::sentence_completed(now, ev.sentence_index,
                                                                 ev.source_words, ev.translation)
                          .to_json());
      }
    }
  };
  for (const auto& j : simulst::read_jsonl_file(input)) {
    const auto event = simulst::PipelineEvent::from_json(j);
    if (event.time_ms < now)
      throw simulst::OrderError("events: time regressed at " + std::to_string(event.time_ms));
    now = event.time_ms;
    if (event.kind != simulst::EventKind::StableCommit) continue;
    std::vector<simulst::CommittedWord> words;
    for (std::size_t k = 0; k < event.words.size(); ++k)
      words.push_back({event.words[k], event.time_ms, event.word_end_ms[k]});
    emit(agent.ingest(words));
  }
  emit(agent.flush());

  Sinks sinks(g.output_path);
  simulst::write_jsonl(sinks.machine(), out);
  return 0;
}

int cmd_run(const GlobalOpts& g, const std::string& scenario_dir, const std::string& fixture) {
  auto scenario = resolve_scenario(scenario_dir, fixture);
  if (!g.config_path.empty()) scenario.config = load_config(g);
  if (g.seed) scenario.config.seed = *g.seed;
  scenario.config.validate();
  simulst::OracleAsrEngine asr(scenario.timeline.words);
  auto translator = simulst::make_translation_engine(scenario.engine_spec);
  const auto events = simulst::run_pipeline(scenario.timeline, scenario.config, asr, *translator);
  Sinks sinks(g.output_path);
  simulst::write_jsonl(sinks.machine(), simulst::events_to_jsonl(events));
  return 0;
}

int cmd_eval_latency(const GlobalOpts& g, const std::string& events_path,
                     const std::string& refs_path, const std::string& unit_name) {
  const auto unit = simulst::latency_unit_from_string(unit_name);
  const auto events = simulst::events_from_jsonl(simulst::read_jsonl_file(events_path));
  const auto log = simulst::replay_log(events);
  const auto refs = simulst::read_refs_jsonl(refs_path);
  const auto report = simulst::stream_laal(log, refs, unit);

  std::vector<ordered_json> rows;
  std::vector<std::vector<std::string>> table;
  for (const auto& s : report.per_sentence) {
    ordered_json j;
    j["sentence_index"] = s.index;
    j["laal_ms"] = s.laal_ms;
    j["tokens"] = s.token_count;
    rows.push_back(std::move(j));
    table.push_back({std::to_string(s.index), fmt(s.laal_ms, 2), std::to_string(s.token_count)});
  }
  ordered_json summary;
  summary["stream_laal_ms"] = report.stream_laal_ms;
  summary["sentences"] = static_cast<std::int64_t>(report.per_sentence.size());
  summary["unit"] = unit_name;
  rows.push_back(std::move(summary));

  Sinks sinks(g.output_path);
  simulst::write_jsonl(sinks.machine(), rows);
  print_table(sinks.human(), {"sentence", "laal_ms", "tokens"}, table);
  sinks.human() << "stream_laal_ms " << fmt(report.stream_laal_ms, 2) << " (" << unit_name
                << " units, " << report.per_sentence.size() << " sentences)\n";
  return 0;
}

int cmd_eval_bleu(const GlobalOpts& g, const std::string& hyp_path, const std::string& ref_path,
                  const std::string& unit_name, const std::string& smoothing_name) {
  const auto unit = simulst::bleu_unit_from_string(unit_name);
  simulst::BleuSmoothing smoothing;
  if (smoothing_name == "none") smoothing = simulst::BleuSmoothing::None;
  else if (smoothing_name == "exp") smoothing = simulst::BleuSmoothing::Exp;
  else throw simulst::ConfigError("unknown smoothing '" + smoothing_name + "'");

  const auto hyps = read_lines(hyp_path);
  const auto refs = read_lines(ref_path);
  const auto report = simulst::corpus_bleu(hyps, refs, unit, smoothing);

  ordered_json j;
  j["bleu"] = report.bleu;
  j["precisions"] = report.precisions;
  j["brevity_penalty"] = report.brevity_penalty;
  j["hyp_len"] = report.hyp_len;
  j["ref_len"] = report.ref_len;
  j["unit"] = unit_name;
  j["smoothing"] = smoothing_name;

  Sinks sinks(g.output_path);
  simulst::write_jsonl(sinks.machine(), {j});
  print_table(sinks.human(), {"bleu", "p1", "p2", "p3", "p4", "bp", "hyp_len", "ref_len"},
              {{fmt(report.bleu, 4), fmt(report.precisions[0], 4), fmt(report.precisions[1], 4),
                fmt(report.precisions[2], 4), fmt(report.precisions[3], 4),
                fmt(report.brevity_penalty, 4), std::to_string(report.hyp_len),
                std::to_string(report.ref_len)}});
  return 0;
}

int cmd_sweep(const GlobalOpts& g, const std::string& scenario_dir, const std::string& fixture,
              const std::string& mud_csv, const std::string& vpt_csv, const std::string& msd_csv,
              const std::string& mcs_csv, int jobs) {
  auto scenario = resolve_scenario(scenario_dir, fixture);
  if (!g.config_path.empty()) scenario.config = load_config(g);
  if (g.seed) scenario.config.seed = *g.seed;
  simulst::SweepGrid grid;
  grid.max_unvoiced_ms = parse_grid<std::int64_t>(mud_csv);
  grid.voice_threshold = parse_grid<double>(vpt_csv);
  grid.max_segment_ms = parse_grid<std::int64_t>(msd_csv);
  grid.min_chunk_size_words = parse_grid<int>(mcs_csv);
  const auto rows = simulst::run_sweep(scenario, grid, jobs);

  std::vector<ordered_json> out;
  std::vector<std::vector<std::string>> table;
  bool any_error = false;
  for (const auto& row : rows) {
    out.push_back(row.to_json());
    const auto& seg = row.config.segmenter;
    if (row.error.empty()) {
      table.push_back({std::to_string(seg.max_unvoiced_ms), fmt(seg.voice_threshold, 2),
                       std::to_string(seg.max_segment_ms),
                       std::to_string(row.config.agent.min_chunk_size_words),
                       fmt(row.stream_laal_ms, 2), fmt(row.bleu, 2), row.regime_band});
    } else {
      any_error = true;
      table.push_back({std::to_string(seg.max_unvoiced_ms), fmt(seg.voice_threshold, 2),
                       std::to_string(seg.max_segment_ms),
                       std::to_string(row.config.agent.min_chunk_size_words), "error", "error",
                       row.error});
    }
  }
  Sinks sinks(g.output_path);
  simulst::write_jsonl(sinks.machine(), out);
  print_table(sinks.human(), {"mud_ms", "vpt", "msd_ms", "mcs", "stream_laal_ms", "bleu", "band"},
              table);
  return any_error ? 1 : 0;
}

// Scores every (source, target) pair in one batch through an external command
// reading TSV lines on stdin and writing one score per line.
class ExternalScorer : public simulst::QualityScorer {
 public:
  ExternalScorer(const std::string& command, const std::vector<simulst::CorpusSample>& samples) {
    namespace fs = std::filesystem;
    const auto dir = fs::temp_directory_path();
    const auto in_path = dir / "simulst_scorer_in.tsv";
    const auto out_path = dir / "simulst_scorer_out.txt";
    {
      std::ofstream in(in_path);
      for (const auto& s : samples) {
        std::string src = s.source, tgt = s.target;
        for (auto* f : {&src, &tgt})
          for (auto& ch : *f)
            if (ch == '\t' || ch == '\n') ch = ' ';
        in << src << '\t' << tgt << '\n';
      }
    }
    const auto cmd = command + " < " + in_path.string() + " > " + out_path.string();
    if (std::system(cmd.c_str()) != 0)
      throw simulst::ScorerFailure("external scorer command failed: " + command);
    const auto lines = read_lines(out_path.string());
    if (lines.size() != samples.size())
      throw simulst::ScorerFailure("external scorer returned " + std::to_string(lines.size()) +
                                   " scores for " + std::to_string(samples.size()) + " samples");
    for (std::size_t k = 0; k < samples.size(); ++k) {
      try {
        scores_[key(samples[k].source, samples[k].target)] = std::stod(lines[k]);
      } catch (const std::exception&) {
        throw simulst::ScorerFailure("external scorer emitted a non-numeric score: " + lines[k]);
      }
    }
  }

  double score(const std::string& source, const std::string& target) override {
    const auto it = scores_.find(key(source, target));
    if (it == scores_.end()) throw simulst::ScorerFailure("no score for sample");
    return it->second;
  }

 private:
  static std::string key(const std::string& s, const std::string& t) { return s + '\x1f' + t; }
  std::map<std::string, double> scores_;
};

int cmd_clean(const GlobalOpts& g, const std::string& input, const std::string& format_flag,
              const std::string& lang_pair, double threshold, const std::string& scorer_flag) {
  std::string format = format_flag;
  if (format == "auto")
    format = simulst::ends_with(input, ".tsv") || simulst::ends_with(input, ".txt") ? "tsv"
                                                                                    : "jsonl";
  std::vector<simulst::CorpusSample> samples;
  if (format == "jsonl") {
    for (const auto& j : simulst::read_jsonl_file(input))
      samples.push_back(simulst::CorpusSample::from_json(j));
  } else if (format == "tsv") {
    const auto pair = simulst::language_pair_from_string(lang_pair);
    for (const auto& line : read_lines(input)) {
      if (line.empty()) continue;
      simulst::CorpusSample s;
      s.language_pair = pair;
      const auto tab1 = line.find('\t');
      if (tab1 == std::string::npos)
        throw simulst::SchemaError("tsv row needs at least source<TAB>target: " + line);
      s.source = line.substr(0, tab1);
      const auto tab2 = line.find('\t', tab1 + 1);
      if (tab2 == std::string::npos) {
        s.target = line.substr(tab1 + 1);
      } else {
        s.target = line.substr(tab1 + 1, tab2 - tab1 - 1);
        s.context = line.substr(tab2 + 1);
      }
      samples.push_back(std::move(s));
    }
  } else {
    throw simulst::ConfigError("unknown format '" + format + "' (expected jsonl or tsv)");
  }

  std::unique_ptr<simulst::QualityScorer> scorer;
  if (scorer_flag == "lexical") {
    scorer = std::make_unique<simulst::LexicalOverlapScorer>();
  } else if (simulst::starts_with(scorer_flag, "external:")) {
    scorer = std::make_unique<ExternalScorer>(scorer_flag.substr(9), samples);
  } else {
    throw simulst::ConfigError("unknown scorer '" + scorer_flag +
                               "' (expected lexical or external:<cmd>)");
  }
  const auto report = simulst::clean(samples, *scorer, threshold);

  Sinks sinks(g.output_path);
  if (format == "jsonl") {
    std::vector<ordered_json> rows;
    for (const auto& s : report.kept) rows.push_back(s.to_json());
    simulst::write_jsonl(sinks.machine(), rows);
  } else {
    for (const auto& s : report.kept)
      sinks.machine() << s.source << '\t' << s.target << '\t' << s.context << '\n';
  }
  print_table(sinks.human(),
              {"input", "kept", "len", "markup", "latin", "quality", "scorer_err"},
              {{std::to_string(report.input), std::to_string(report.kept.size()),
                std::to_string(report.dropped_length), std::to_string(report.dropped_markup),
                std::to_string(report.dropped_latin), std::to_string(report.dropped_quality),
                std::to_string(report.dropped_scorer_error)}});
  return 0;
}

int cmd_build_prompts(const GlobalOpts& g, const std::string& source_path,
                      const std::string& target_path, const std::string& align_path,
                      const std::string& lang_pair, const std::string& context_mode,
                      double merge_prob, double shift_prob, int max_shift) {
  const auto pair = simulst::language_pair_from_string(lang_pair);
  const auto sources = read_lines(source_path);
  const auto targets = read_lines(target_path);
  const auto aligns = read_lines(align_path);
  if (sources.size() != targets.size() || sources.size() != aligns.size())
    throw simulst::LengthMismatch("line counts differ: " + std::to_string(sources.size()) +
                                  " source, " + std::to_string(targets.size()) + " target, " +
                                  std::to_string(aligns.size()) + " alignment");
  if (context_mode != "previous" && context_mode != "none")
    throw simulst::ConfigError("unknown context mode '" + context_mode + "'");
  const std::uint64_t seed = static_cast<std::uint64_t>(load_config(g).seed);

  std::vector<ordered_json> rows;
  for (std::size_t k = 0; k < sources.size(); ++k) {
    simulst::AlignedSentencePair pair_k;
    pair_k.source = simulst::split_ws(sources[k]);
    pair_k.target = simulst::split_ws(targets[k]);
    pair_k.alignment = simulst::parse_pharaoh(aligns[k]);
    if (context_mode == "previous" && k > 0) pair_k.context = simulst::split_ws(sources[k - 1]);
    pair_k.validate();
    auto plan = simulst::segment_alignment(pair_k);
    plan = simulst::merge_shift(plan, seed + k, merge_prob, shift_prob, max_shift);
    const auto prompt = simulst::serialize(plan, pair_k, pair);

    ordered_json j;
    j["header"] = prompt.header;
    j["tokens"] = prompt.tokens;
    j["loss_mask"] = prompt.loss_mask;
    ordered_json intervals = ordered_json::array();
    for (const auto& iv : plan.intervals)
      intervals.push_back({iv.src_begin, iv.src_end, iv.tgt_begin, iv.tgt_end});
    j["intervals"] = intervals;
    rows.push_back(std::move(j));
  }
  Sinks sinks(g.output_path);
  simulst::write_jsonl(sinks.machine(), rows);
  return 0;
}

int cmd_make_fixture(const GlobalOpts& g, const std::string& name, const std::string& dir,
                     bool list) {
  if (list) {
    for (const auto& n : simulst::fixture_names()) std::cout << n << "\n";
    return 0;
  }
  if (name.empty()) throw simulst::ConfigError("fixture name required (or --list)");
  if (dir.empty()) throw simulst::ConfigError("--dir is required");
  auto scenario = simulst::make_fixture(name);
  if (g.seed) scenario.config.seed = *g.seed;
  simulst::write_scenario(scenario, dir);
  std::cerr << "wrote scenario '" << name << "' to " << dir << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"deterministic simultaneous speech-translation pipeline"};
  app.require_subcommand(1);
  GlobalOpts g;
  app.add_option("--config", g.config_path, "pipeline config JSON file");
  app.add_option("--seed", g.seed, "override the config seed");
  app.add_option("--output", g.output_path, "machine-readable output file (default stdout)");

  int rc = 0;
  auto guard = [&rc](auto fn) {
    return [&rc, fn]() {
      try {
        rc = fn();
      } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        rc = 1;
      }
    };
  };

  // segment
  auto* segment = app.add_subcommand("segment", "segment a frame timeline");
  segment->fallthrough();
  std::string segment_input;
  std::optional<std::int64_t> mud, msd;
  std::optional<double> vpt;
  segment->add_option("--input", segment_input, "frames JSON-lines file")->required();
  segment->add_option("--mud-ms", mud, "max unvoiced duration override");
  segment->add_option("--vpt", vpt, "voice probability threshold override");
  segment->add_option("--msd-ms", msd, "max segment duration override");
  segment->callback(guard([&] { return cmd_segment(g, segment_input, mud, vpt, msd); }));

  // transcribe-sim
  auto* transcribe = app.add_subcommand("transcribe-sim", "replay a scripted hypothesis trace");
  transcribe->fallthrough();
  std::string transcribe_input;
  int window = 2, cutoff = 8;
  transcribe->add_option("--input", transcribe_input, "hypothesis trace JSON-lines file")
      ->required();
  transcribe->add_option("--window", window, "agreement window (default 2)");
  transcribe->add_option("--cutoff", cutoff, "context cutoff in words (default 8)");
  transcribe->callback(guard([&] { return cmd_transcribe_sim(g, transcribe_input, window, cutoff); }));

  // translate-sim
  auto* translate = app.add_subcommand("translate-sim", "drive the agent from commit events");
  translate->fallthrough();
  std::string translate_input, engine_flag = "identity";
  std::optional<int> mcs;
  translate->add_option("--input", translate_input, "events JSON-lines file")->required();
  translate->add_option("--mcs", mcs, "minimum chunk size override");
  translate->add_option("--engine", engine_flag, "identity | dict:<path> | scripted:<path>");
  translate->callback(guard([&] { return cmd_translate_sim(g, translate_input, mcs, engine_flag); }));

  // run
  auto* run = app.add_subcommand("run", "run the full pipeline on a scenario");
  run->fallthrough();
  std::string run_dir, run_fixture;
  run->add_option("--scenario", run_dir, "scenario directory");
  run->add_option("--fixture", run_fixture, "built-in fixture name");
  run->callback(guard([&] { return cmd_run(g, run_dir, run_fixture); }));

  // eval-latency
  auto* latency = app.add_subcommand("eval-latency", "stream latency from an event log");
  latency->fallthrough();
  std::string latency_events, latency_refs, latency_unit = "word";
  latency->add_option("--events", latency_events, "events JSON-lines file")->required();
  latency->add_option("--refs", latency_refs, "references JSON-lines file")->required();
  latency->add_option("--unit", latency_unit, "word | char");
  latency->callback(
      guard([&] { return cmd_eval_latency(g, latency_events, latency_refs, latency_unit); }));

  // eval-bleu
  auto* bleu = app.add_subcommand("eval-bleu", "corpus BLEU");
  bleu->fallthrough();
  std::string bleu_hyp, bleu_ref, bleu_unit = "word", bleu_smoothing = "none";
  bleu->add_option("--hyp", bleu_hyp, "hypothesis text file, one segment per line")->required();
  bleu->add_option("--ref", bleu_ref, "reference text file, one segment per line")->required();
  bleu->add_option("--unit", bleu_unit, "word | char");
  bleu->add_option("--smoothing", bleu_smoothing, "none | exp");
  bleu->callback(guard([&] { return cmd_eval_bleu(g, bleu_hyp, bleu_ref, bleu_unit, bleu_smoothing); }));

  // sweep
  auto* sweep = app.add_subcommand("sweep", "grid sweep with latency/quality per point");
  sweep->fallthrough();
  std::string sweep_dir, sweep_fixture, mud_csv, vpt_csv, msd_csv, mcs_csv;
  int jobs = 1;
  sweep->add_option("--scenario", sweep_dir, "scenario directory");
  sweep->add_option("--fixture", sweep_fixture, "built-in fixture name");
  sweep->add_option("--mud-grid", mud_csv, "comma-separated max unvoiced durations");
  sweep->add_option("--vpt-grid", vpt_csv, "comma-separated voice thresholds");
  sweep->add_option("--msd-grid", msd_csv, "comma-separated max segment durations");
  sweep->add_option("--mcs-grid", mcs_csv, "comma-separated minimum chunk sizes");
  sweep->add_option("--jobs", jobs, "parallel evaluations (default 1)");
  sweep->callback(guard([&] {
    return cmd_sweep(g, sweep_dir, sweep_fixture, mud_csv, vpt_csv, msd_csv, mcs_csv, jobs);
  }));

  // clean
  auto* clean = app.add_subcommand("clean", "filter a parallel corpus");
  clean->fallthrough();
  std::string clean_input, clean_format = "auto", clean_pair = "en-de", clean_scorer = "lexical";
  double threshold = 0.6;
  clean->add_option("--input", clean_input, "corpus file (JSON-lines or TSV)")->required();
  clean->add_option("--format", clean_format, "auto | jsonl | tsv");
  clean->add_option("--lang-pair", clean_pair, "language pair for TSV rows (en-de | en-zh)");
  clean->add_option("--qe-threshold", threshold, "quality score floor (default 0.6)");
  clean->add_option("--scorer", clean_scorer, "lexical | external:<cmd>");
  clean->callback(guard([&] {
    return cmd_clean(g, clean_input, clean_format, clean_pair, threshold, clean_scorer);
  }));

  // build-prompts
  auto* prompts = app.add_subcommand("build-prompts", "serialize conversational prompts");
  prompts->fallthrough();
  std::string prompts_source, prompts_target, prompts_align, prompts_pair = "en-de";
  std::string context_mode = "previous";
  double merge_prob = 0.0, shift_prob = 0.0;
  int max_shift = 0;
  prompts->add_option("--source", prompts_source, "source sentences, one per line")->required();
  prompts->add_option("--target", prompts_target, "target sentences, one per line")->required();
  prompts->add_option("--align", prompts_align, "pharaoh alignments, one per line")->required();
  prompts->add_option("--lang-pair", prompts_pair, "en-de | en-zh");
  prompts->add_option("--context", context_mode, "previous | none (default previous)");
  prompts->add_option("--merge-prob", merge_prob, "interval merge probability");
  prompts->add_option("--shift-prob", shift_prob, "boundary shift probability");
  prompts->add_option("--max-shift", max_shift, "max boundary shift in words");
  prompts->callback(guard([&] {
    return cmd_build_prompts(g, prompts_source, prompts_target, prompts_align, prompts_pair,
                             context_mode, merge_prob, shift_prob, max_shift);
  }));

  // make-fixture
  auto* fixture = app.add_subcommand("make-fixture", "write a built-in scenario directory");
  fixture->fallthrough();
  std::string fixture_name, fixture_dir;
  bool fixture_list = false;
  fixture->add_option("name", fixture_name, "fixture name");
  fixture->add_option("--dir", fixture_dir, "output directory");
  fixture->add_flag("--list", fixture_list, "list available fixtures");
  fixture->callback(
      guard([&] { return cmd_make_fixture(g, fixture_name, fixture_dir, fixture_list); }));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }
  return rc;
}
