#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "simulst/agent.hpp"
#include "simulst/engines.hpp"
#include "simulst/util.hpp"

using namespace simulst;

namespace {

std::vector<CommittedWord> committed(const std::vector<std::string>& words) {
  std::vector<CommittedWord> out;
  for (const auto& w : words) out.push_back({w, 0, 0});
  return out;
}

struct RecordingEngine : TranslationEngine {
  std::vector<SerializedPrompt> prompts;

  std::vector<std::string> generate(const SerializedPrompt& prompt) override {
    prompts.push_back(prompt);
    auto out = open_chunk_words(prompt);
    out.push_back("</s>");
    return out;
  }
};

bool is_translation(const AgentEvent& ev) { return ev.kind == AgentEvent::Kind::Translation; }
bool is_completion(const AgentEvent& ev) { return ev.kind == AgentEvent::Kind::Completion; }

}  // namespace

TEST_CASE("fewer untranslated words than the chunk floor cause no action") {
  IdentityEngine engine;
  TranslationAgent agent({3, LanguagePair::EnDe}, engine);
  CHECK(agent.ingest(committed({"Let", "us"})).empty());
  CHECK(agent.buffered_words() == 2);
  CHECK(agent.running_translation().empty());
}

TEST_CASE("reaching the chunk floor translates exactly the pending words") {
  IdentityEngine engine;
  TranslationAgent agent({3, LanguagePair::EnDe}, engine);
  agent.ingest(committed({"Let", "us"}));
  const auto events = agent.ingest(committed({"go"}));
  REQUIRE(events.size() == 1);
  CHECK(is_translation(events[0]));
  CHECK(events[0].trigger == ActionTrigger::ChunkSize);
  CHECK(events[0].chunk == std::vector<std::string>{"Let", "us", "go"});
  CHECK(events[0].tokens == std::vector<std::string>{"Let", "us", "go"});
  CHECK(events[0].sentence_index == 0);
  CHECK(agent.completed_sentences() == 0);
}

TEST_CASE("a chunk larger than the floor goes out whole") {
  IdentityEngine engine;
  TranslationAgent agent({3, LanguagePair::EnDe}, engine);
  const auto events = agent.ingest(committed({"a", "b", "c", "d", "e"}));
  REQUIRE(events.size() == 1);
  CHECK(events[0].chunk.size() == 5);
}

TEST_CASE("a sentence boundary fires even below the chunk floor") {
  IdentityEngine engine;
  TranslationAgent agent({5, LanguagePair::EnDe}, engine);
  const auto events = agent.ingest(committed({"Hello", "there.", "How"}));
  REQUIRE(events.size() == 2);
  CHECK(is_translation(events[0]));
  CHECK(events[0].trigger == ActionTrigger::SentenceBoundary);
  CHECK(events[0].chunk == std::vector<std::string>{"Hello", "there."});
  CHECK(is_completion(events[1]));
  CHECK(events[1].source_words == std::vector<std::string>{"Hello", "there."});
  CHECK(events[1].translation == "Hello there.");
  CHECK(agent.memory_bank() == std::vector<std::string>{"Hello", "there."});
  CHECK(agent.buffered_words() == 1);
  CHECK(agent.completed_sentences() == 1);
}

TEST_CASE("later chunks carry only words the earlier actions left behind") {
  RecordingEngine engine;
  TranslationAgent agent({3, LanguagePair::EnDe}, engine);
  agent.ingest(committed({"w1", "w2", "w3"}));
  const auto events = agent.ingest(committed({"w4", "w5", "w6"}));
  REQUIRE(events.size() == 1);
  CHECK(events[0].chunk == std::vector<std::string>{"w4", "w5", "w6"});
  REQUIRE(engine.prompts.size() == 2);
  CHECK(engine.prompts[1].tokens ==
        std::vector<std::string>{"<s>", "<t>", "w1", "w2", "w3", "</t>", "w1", "w2", "w3",
                                 "</s>", "<s>", "<t>", "w4", "w5", "w6", "</t>"});
}

TEST_CASE("the incremental prompt ends open and masks nothing") {
  RecordingEngine engine;
  TranslationAgent agent({2, LanguagePair::EnDe}, engine);
  agent.ingest(committed({"one"}));
  const auto prompt = agent.build_incremental_prompt();
  CHECK(prompt.header == "Now translate the following sentence from English to German Assistant:");
  CHECK(prompt.tokens == std::vector<std::string>{"<s>", "<t>", "one", "</t>"});
  CHECK(std::count(prompt.loss_mask.begin(), prompt.loss_mask.end(), true) == 0);
}

TEST_CASE("the completed sentence becomes the next prompt's context") {
  RecordingEngine engine;
  TranslationAgent agent({2, LanguagePair::EnDe}, engine);
  agent.ingest(committed({"Hi", "there.", "Nice"}));
  const auto prompt = agent.build_incremental_prompt();
  CHECK(prompt.header ==
        "Use the following sentence as context: Hi there.\n"
        "Now translate the following sentence from English to German Assistant:");
  CHECK(prompt.tokens == std::vector<std::string>{"<s>", "<t>", "Nice", "</t>"});
}

TEST_CASE("an empty or fully translated oldest sentence has no prompt") {
  IdentityEngine engine;
  TranslationAgent agent({2, LanguagePair::EnDe}, engine);
  CHECK_THROWS_AS(agent.build_incremental_prompt(), EmptyChunk);
  agent.ingest(committed({"a", "b"}));
  CHECK_THROWS_AS(agent.build_incremental_prompt(), EmptyChunk);
}

TEST_CASE("the strict trigger waits for one word past the floor") {
  IdentityEngine engine;
  AgentConfig cfg{3, LanguagePair::EnDe};
  cfg.strict_chunk_trigger = true;
  TranslationAgent agent(cfg, engine);
  CHECK(agent.ingest(committed({"a", "b", "c"})).empty());
  const auto events = agent.ingest(committed({"d"}));
  REQUIRE(events.size() == 1);
  CHECK(events[0].chunk.size() == 4);
}

TEST_CASE("flush drains short chunks and unterminated sentences") {
  IdentityEngine engine;
  TranslationAgent agent({50, LanguagePair::EnDe}, engine);
  agent.ingest(committed({"one", "two"}));
  const auto events = agent.flush();
  REQUIRE(events.size() == 2);
  CHECK(events[0].trigger == ActionTrigger::Flush);
  CHECK(events[0].chunk == std::vector<std::string>{"one", "two"});
  CHECK(is_completion(events[1]));
  CHECK(events[1].translation == "one two");
  CHECK(agent.buffered_words() == 0);
  CHECK(agent.flush().empty());
}

TEST_CASE("a terminal word folds into its sentence before the boundary fires") {
  IdentityEngine engine;
  TranslationAgent agent({2, LanguagePair::EnDe}, engine);
  agent.ingest(committed({"a", "b"}));
  CHECK(agent.ingest(committed({"c."})).empty());
  const auto events = agent.ingest(committed({"d"}));
  REQUIRE(events.size() == 2);
  CHECK(events[0].trigger == ActionTrigger::SentenceBoundary);
  CHECK(events[0].chunk == std::vector<std::string>{"c."});
  CHECK(events[1].translation == "a b c.");
  CHECK(agent.memory_bank() == std::vector<std::string>{"a", "b", "c."});
}

TEST_CASE("the memory bank holds only the most recent sentence") {
  IdentityEngine engine;
  TranslationAgent agent({10, LanguagePair::EnDe}, engine);
  agent.ingest(committed({"First.", "Second", "one.", "tail"}));
  CHECK(agent.memory_bank() == std::vector<std::string>{"Second", "one."});
  CHECK(agent.completed_sentences() == 2);
}

TEST_CASE("the memory bank can cache the translation instead of the source") {
  DictionaryEngine engine({{"Hello", "Hallo"}, {"there.", "dort."}});
  AgentConfig cfg{10, LanguagePair::EnDe};
  cfg.memory_bank_translation = true;
  TranslationAgent agent(cfg, engine);
  agent.ingest(committed({"Hello", "there.", "next"}));
  CHECK(agent.memory_bank() == std::vector<std::string>{"Hallo", "dort."});
}

TEST_CASE("generation stops at the budget") {
  ScriptedTranslationEngine engine({{"x1", "x2", "x3", "x4", "x5", "</s>"}});
  AgentConfig cfg{3, LanguagePair::EnDe};
  cfg.generation_budget = 2;
  TranslationAgent agent(cfg, engine);
  const auto events = agent.ingest(committed({"a", "b", "c"}));
  REQUIRE(events.size() == 1);
  CHECK(events[0].tokens == std::vector<std::string>{"x1", "x2"});
}

TEST_CASE("a generation without a closer still closes the interval") {
  ScriptedTranslationEngine engine({{"y1", "y2"}, {"z1", "</s>"}});
  TranslationAgent agent({2, LanguagePair::EnDe}, engine);
  const auto events = agent.ingest(committed({"a", "b"}));
  REQUIRE(events.size() == 1);
  CHECK(events[0].tokens == std::vector<std::string>{"y1", "y2"});
  agent.ingest(committed({"c", "d"}));
  CHECK(agent.running_translation() == std::vector<std::string>{"y1", "y2", "z1"});
}

TEST_CASE("delimiter-shaped buffer words keep the live prompt parseable") {
  RecordingEngine engine;
  TranslationAgent agent({1, LanguagePair::EnDe}, engine);
  const auto events = agent.ingest(committed({"</s>"}));
  REQUIRE(events.size() == 1);
  CHECK(events[0].chunk == std::vector<std::string>{"</s>"});
  CHECK(engine.prompts[0].tokens ==
        std::vector<std::string>{"<s>", "<t>", "\\</s>", "</t>"});
  agent.ingest(committed({"plain"}));
  REQUIRE(engine.prompts.size() == 2);
  CHECK(engine.prompts[1].tokens.back() == "</t>");
}

TEST_CASE("agent configuration is validated") {
  IdentityEngine engine;
  CHECK_THROWS_AS(TranslationAgent({0, LanguagePair::EnDe}, engine), ConfigError);
  AgentConfig cfg{3, LanguagePair::EnDe};
  cfg.generation_budget = 0;
  CHECK_THROWS_AS(TranslationAgent(cfg, engine), ConfigError);
}

TEST_CASE("randomized streams keep every agent invariant") {
  for (int trial = 0; trial < 100; ++trial) {
    StableRng rng(60606 + trial);
    const int mcs = 1 + static_cast<int>(rng.next_int(0, 6));
    const bool strict = rng.next_bool(0.3);
    const int engine_kind = static_cast<int>(rng.next_int(0, 2));

    std::vector<std::string> stream;
    const int total = 1 + static_cast<int>(rng.next_int(0, 39));
    for (int k = 0; k < total; ++k) {
      std::string w = "w" + std::to_string(1 + rng.next_int(0, 8));
      if (rng.next_bool(0.2)) w += ".";
      stream.push_back(w);
    }

    std::unique_ptr<TranslationEngine> engine;
    if (engine_kind == 0) {
      engine = std::make_unique<IdentityEngine>();
    } else {
      std::map<std::string, std::string> map;
      for (int k = 1; k <= 9; ++k) {
        map["w" + std::to_string(k)] = "v" + std::to_string(k);
        map["w" + std::to_string(k) + "."] = "v" + std::to_string(k) + ".";
      }
      engine = std::make_unique<DictionaryEngine>(std::move(map), engine_kind == 2 ? 1 : 0);
    }

    AgentConfig cfg{mcs, LanguagePair::EnDe};
    cfg.strict_chunk_trigger = strict;
    TranslationAgent agent(cfg, *engine);
    CAPTURE(trial, mcs, strict, engine_kind, stream);

    std::vector<std::string> last_running;
    std::vector<std::string> completed_sources;
    std::vector<std::string> last_completed_sentence;
    std::int64_t completions = 0;

    auto check_events = [&](const std::vector<AgentEvent>& events, bool flushing) {
      for (const auto& ev : events) {
        if (ev.kind == AgentEvent::Kind::Translation) {
          CHECK(ev.sentence_index == completions);
          REQUIRE(!ev.chunk.empty());
          for (std::size_t k = 0; k + 1 < ev.chunk.size(); ++k)
            CHECK(!is_sentence_terminal(ev.chunk[k]));
          if (ev.trigger == ActionTrigger::ChunkSize) {
            const std::size_t floor = static_cast<std::size_t>(mcs) + (strict ? 1 : 0);
            CHECK(ev.chunk.size() >= floor);
          }
          if (!flushing && ev.trigger == ActionTrigger::Flush) FAIL("flush trigger mid-stream");
        } else {
          CHECK(ev.sentence_index == completions);
          ++completions;
          for (const auto& w : ev.source_words) completed_sources.push_back(w);
          last_completed_sentence = ev.source_words;
        }
      }
      if (completions > 0) CHECK(agent.memory_bank() == last_completed_sentence);
      const auto& running = agent.running_translation();
      REQUIRE(running.size() >= last_running.size());
      CHECK(std::equal(last_running.begin(), last_running.end(), running.begin()));
      last_running = running;
      const auto& bank = agent.memory_bank();
      for (std::size_t k = 0; k + 1 < bank.size(); ++k)
        CHECK(!is_sentence_terminal(bank[k]));
    };

    std::size_t fed = 0;
    while (fed < stream.size()) {
      const auto step = std::min<std::size_t>(1 + rng.next_int(0, 3), stream.size() - fed);
      std::vector<std::string> batch(stream.begin() + fed, stream.begin() + fed + step);
      fed += step;
      check_events(agent.ingest(committed(batch)), false);
    }
    check_events(agent.flush(), true);

    CHECK(agent.buffered_words() == 0);
    CHECK(completed_sources == stream);
    CHECK(completions == static_cast<std::int64_t>(split_sentences(stream).size()));
    CHECK(completions == agent.completed_sentences());
    if (engine_kind == 0) CHECK(last_running == stream);
  }
}
