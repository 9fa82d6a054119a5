#include <catch2/catch_amalgamated.hpp>

#include <stdexcept>
#include <string>
#include <vector>

#include "simulst/cleaner.hpp"
#include "simulst/fixtures.hpp"

using namespace simulst;

namespace {

bool same_sample(const CorpusSample& a, const CorpusSample& b) {
  return a.source == b.source && a.target == b.target && a.context == b.context &&
         a.language_pair == b.language_pair;
}

const std::string kCtx = "the previous sentence talked about the weather";

// Source and target share exactly `shared` tokens out of 100 each, so the
// overlap score is shared/100 on the nose.
CorpusSample overlap_sample(int shared) {
  std::string src, tgt;
  for (int i = 0; i < 100; ++i) {
    if (i) {
      src += ' ';
      tgt += ' ';
    }
    if (i < shared) {
      src += "t" + std::to_string(i);
      tgt += "t" + std::to_string(i);
    } else {
      src += "a" + std::to_string(i);
      tgt += "b" + std::to_string(i);
    }
  }
  return {src, tgt, kCtx, LanguagePair::EnDe};
}

class ConstantScorer : public QualityScorer {
 public:
  explicit ConstantScorer(double value) : value_(value) {}
  double score(const std::string&, const std::string&) override { return value_; }

 private:
  double value_;
};

class FragileScorer : public QualityScorer {
 public:
  double score(const std::string& source, const std::string&) override {
    if (source.find("boom") != std::string::npos) throw std::runtime_error("scorer offline");
    return 1.0;
  }
};

}  // namespace

TEST_CASE("the fixture corpus keeps exactly the hand-audited samples") {
  const auto corpus = cleaner_corpus();
  REQUIRE(corpus.size() == 20);
  LexicalOverlapScorer scorer;
  const auto report = clean(corpus, scorer, 0.6);

  CHECK(report.input == 20);
  CHECK(report.dropped_length == 4);
  CHECK(report.dropped_markup == 5);
  CHECK(report.dropped_latin == 1);
  CHECK(report.dropped_quality == 2);
  CHECK(report.dropped_scorer_error == 0);

  const std::vector<CorpusSample> want{
      {"alpha beta gamma delta epsilon zeta eta theta",
       "alpha beta gamma delta epsilon zeta eta theta", kCtx, LanguagePair::EnDe},
      {"this source has 25 chars!", "this source has 25 chars!", kCtx, LanguagePair::EnDe},
      {"omicron pi rho sigma tau upsilon phi chi psi",
       "omicron pi rho sigma tau upsilon phi chi psi", "a context of 25 chars ok!",
       LanguagePair::EnDe},
      {"alpha  beta gamma delta epsilon zeta eta theta",
       "alpha  beta gamma delta epsilon zeta eta theta", kCtx, LanguagePair::EnDe},
      {"the well-known story was retold again yesterday evening",
       "the well-known story was retold again yesterday evening", kCtx, LanguagePair::EnDe},
      {"terminal B 1430 bus 9 1445 stop 12", "B 站 1430 路 9 号 1445 12", kCtx,
       LanguagePair::EnZh},
      {"alpha beta gamma delta epsilon", "alpha beta gamma sechs sieben", kCtx,
       LanguagePair::EnDe},
      {"Alpha Beta Gamma Delta Epsilon", "alpha beta gamma delta epsilon", kCtx,
       LanguagePair::EnDe},
  };
  REQUIRE(report.kept.size() == want.size());
  for (std::size_t i = 0; i < want.size(); ++i) {
    CAPTURE(i);
    CHECK(same_sample(report.kept[i], want[i]));
  }

  const auto j = report.to_json();
  CHECK(j["input"] == 20);
  CHECK(j["kept"] == 8);
  CHECK(j["dropped_length"] == 4);
  CHECK(j["dropped_markup"] == 5);
  CHECK(j["dropped_latin"] == 1);
  CHECK(j["dropped_quality"] == 2);
  CHECK(j["dropped_scorer_error"] == 0);
}

TEST_CASE("cleaning is idempotent") {
  const auto corpus = cleaner_corpus();
  LexicalOverlapScorer scorer;
  const auto once = clean(corpus, scorer, 0.6);
  const auto twice = clean(once.kept, scorer, 0.6);
  REQUIRE(twice.kept.size() == once.kept.size());
  CHECK(twice.input == static_cast<std::int64_t>(once.kept.size()));
  for (std::size_t i = 0; i < once.kept.size(); ++i) {
    CAPTURE(i);
    CHECK(same_sample(twice.kept[i], once.kept[i]));
  }
}

TEST_CASE("code points are counted, not bytes") {
  CHECK(codepoint_length("this source has 24 chars") == 24);
  CHECK(codepoint_length("this source has 25 chars!") == 25);
  CHECK(codepoint_length("café négocie ses prix dè") == 24);
  CHECK(codepoint_length("你好") == 2);
  CHECK(codepoint_length("") == 0);
}

TEST_CASE("latin detection wants two letters in a row") {
  CHECK(detect_latin_words("我们喝了green tea很开心"));
  CHECK_FALSE(detect_latin_words("B 站 1430 路 9 号 1445 12"));
  CHECK_FALSE(detect_latin_words("三 A 六 B 九"));
  CHECK_FALSE(detect_latin_words("1430 路"));
  CHECK(detect_latin_words("ok"));
  CHECK_FALSE(detect_latin_words(""));
}

TEST_CASE("the overlap scorer is a case-folded dice coefficient") {
  LexicalOverlapScorer scorer;
  CHECK(scorer.score("", "") == 1.0);
  CHECK(scorer.score("word", "") == 0.0);
  CHECK(scorer.score("", "word") == 0.0);
  CHECK(scorer.score("Alpha Beta", "alpha beta") == 1.0);
  CHECK(scorer.score("a b c d e", "a b c x y") == 0.6);
  CHECK(scorer.score("a a a b", "a c") == 0.5);  // sets, not bags
  CHECK(scorer.score(overlap_sample(59).source, overlap_sample(59).target) == 0.59);
  CHECK(scorer.score(overlap_sample(61).source, overlap_sample(61).target) == 0.61);
}

TEST_CASE("scores straddling the threshold split as expected") {
  LexicalOverlapScorer scorer;
  const auto low = clean({overlap_sample(59)}, scorer, 0.6);
  CHECK(low.kept.empty());
  CHECK(low.dropped_quality == 1);
  const auto high = clean({overlap_sample(61)}, scorer, 0.6);
  CHECK(high.kept.size() == 1);
  CHECK(high.dropped_quality == 0);
  const auto equal = clean({overlap_sample(60)}, scorer, 0.6);
  CHECK(equal.kept.size() == 1);
}

TEST_CASE("a score equal to the threshold keeps the sample") {
  ConstantScorer at(0.3);
  const std::vector<CorpusSample> one{
      {"alpha beta gamma delta epsilon zeta eta theta", "whatever target text", kCtx,
       LanguagePair::EnDe}};
  CHECK(clean(one, at, 0.3).kept.size() == 1);
  ConstantScorer just_below(0.3 - 1e-12);
  CHECK(clean(one, just_below, 0.3).dropped_quality == 1);
}

TEST_CASE("a scorer failure drops the sample under its own count") {
  FragileScorer scorer;
  const std::vector<CorpusSample> samples{
      {"alpha beta gamma delta epsilon zeta eta theta", "t1", kCtx, LanguagePair::EnDe},
      {"boom alpha beta gamma delta epsilon zeta eta", "t2", kCtx, LanguagePair::EnDe},
      {"omicron pi rho sigma tau upsilon phi chi psi", "t3", kCtx, LanguagePair::EnDe},
  };
  const auto report = clean(samples, scorer, 0.5);
  CHECK(report.dropped_scorer_error == 1);
  CHECK(report.dropped_quality == 0);
  REQUIRE(report.kept.size() == 2);
  CHECK(report.kept[0].target == "t1");
  CHECK(report.kept[1].target == "t3");
}

TEST_CASE("the threshold must live in the unit interval") {
  LexicalOverlapScorer scorer;
  CHECK_THROWS_AS(clean({}, scorer, -0.1), ConfigError);
  CHECK_THROWS_AS(clean({}, scorer, 1.1), ConfigError);
  CHECK(clean({}, scorer, 0.0).input == 0);
  CHECK(clean({}, scorer, 1.0).input == 0);
}

TEST_CASE("samples round-trip through json") {
  const CorpusSample sample{"source words here", "target words here", "prior sentence",
                            LanguagePair::EnZh};
  const auto j = sample.to_json();
  CHECK(j.dump() ==
        R"({"source":"source words here","target":"target words here",)"
        R"("context":"prior sentence","language_pair":"en-zh"})");
  CHECK(same_sample(CorpusSample::from_json(j), sample));

  ordered_json missing = j;
  missing.erase("context");
  CHECK_THROWS_AS(CorpusSample::from_json(missing), SchemaError);
}
