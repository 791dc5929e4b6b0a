#include <doctest.h>

#include <random>

#include "liteval/scoring.hpp"

using namespace liteval;

namespace {

const std::filesystem::path kFixture = LITEVAL_FIXTURE_DIR "/corpus";

}  // namespace

TEST_CASE("mqm_score formula") {
  CHECK(mqm_score(SeverityCounts{0, 1, 2}, 4) == doctest::Approx(-1.75));
  CHECK(mqm_score(SeverityCounts{0, 0, 0}, 3) == 0.0);
  CHECK(mqm_score(SeverityCounts{1, 0, 0}, 5) == doctest::Approx(-5.0));
  CHECK(mqm_score(SeverityCounts{1, 1, 1}, 1, SeverityWeights{10, 2, 1}) == doctest::Approx(-13.0));
  CHECK_THROWS_AS(mqm_score(SeverityCounts{0, 1, 0}, 0), std::invalid_argument);
}

TEST_CASE("severity weights") {
  const auto w = SeverityWeights::parse("25,5,1");
  CHECK(w.non_translation == 25.0);
  CHECK(w.major == 5.0);
  CHECK(w.minor == 1.0);
  CHECK_THROWS(SeverityWeights::parse("1,5,25"));
  CHECK_THROWS(SeverityWeights::parse("25,5"));
  CHECK_THROWS(SeverityWeights::parse("a,b,c"));
}

TEST_CASE("adding an error never raises the MQM score") {
  std::mt19937 rng(7);
  std::uniform_int_distribution<int> count(0, 5), sentences(1, 8), which(0, 2);
  for (int trial = 0; trial < 500; ++trial) {
    SeverityCounts c{static_cast<std::size_t>(count(rng)), static_cast<std::size_t>(count(rng)),
                     static_cast<std::size_t>(count(rng))};
    const int n = sentences(rng);
    const double before = mqm_score(c, n);
    switch (which(rng)) {
      case 0: ++c.non_translation; break;
      case 1: ++c.major; break;
      default: ++c.minor; break;
    }
    CHECK(mqm_score(c, n) < before);
  }
}

TEST_CASE("minmax_scale") {
  const std::vector<double> two{-10, 0};
  CHECK(minmax_scale(two, 0, 6) == std::vector<double>{0, 6});
  const std::vector<double> three{-10, -5, 0};
  CHECK(minmax_scale(three, 0, 6) == std::vector<double>{0, 3, 6});

  const std::vector<double> ranking{-1.3, -1.7, -3.1, -3.2, -8.7, -9.0, -11.2, -11.9, -12.3, -12.6};
  const auto scaled = minmax_scale(ranking, 0, 6);
  for (std::size_t i = 0; i < ranking.size(); ++i) {
    CHECK(scaled[i] == doctest::Approx((ranking[i] + 12.6) / (12.6 - 1.3) * 6.0).epsilon(1e-12));
  }
  CHECK(scaled.front() == doctest::Approx(6.0));
  CHECK(scaled.back() == doctest::Approx(0.0));

  Warnings warnings;
  const std::vector<double> flat{2, 2, 2};
  CHECK(minmax_scale(flat, 0, 6, &warnings) == std::vector<double>{3, 3, 3});
  CHECK(warnings.size() == 1);
}

TEST_CASE("combined_score") {
  CHECK(combined_score(4, 6, 0.0) == 4.0);
  CHECK(combined_score(4, 6, 1.0) == 6.0);
  CHECK(combined_score(4, 6, 0.5) == 5.0);
  CHECK_THROWS_AS(combined_score(4, 6, 1.5), std::invalid_argument);
  CHECK_THROWS_AS(combined_score(4, 6, -0.1), std::invalid_argument);
}

TEST_CASE("free_annotation_score") {
  FreeAnnotation a{"s", "p", {}};
  CHECK(free_annotation_score(a) == 0);
  a.spans = {{0, 1, Polarity::good, "x"}, {1, 2, Polarity::good, "y"}, {2, 3, Polarity::error, "z"}};
  CHECK(free_annotation_score(a) == 1);
  a.spans = {{0, 1, Polarity::error, "x"}, {1, 2, Polarity::error, "y"}, {2, 3, Polarity::error, "z"}};
  CHECK(free_annotation_score(a) == -3);
}

TEST_CASE("system ranking on the fixture") {
  const auto corpus = load_corpus(kFixture);
  const auto ranking = system_ranking(segment_mqm_scores(corpus), corpus, "mqm");
  const std::vector<std::pair<std::string, double>> expected = {
      {"human", -1.0625}, {"gpt4o", -1.25}, {"deepl", -3.0}, {"google", -4.0}, {"qwen", -8.75}, {"tower", -20.75}};
  REQUIRE(ranking.entries.size() == expected.size());
  for (std::size_t i = 0; i < expected.size(); ++i) {
    CHECK(ranking.entries[i].system_id == expected[i].first);
    CHECK(ranking.entries[i].mean_score == doctest::Approx(expected[i].second).epsilon(1e-12));
    CHECK(ranking.entries[i].rank == static_cast<int>(i + 1));
    CHECK(ranking.entries[i].n_segments == 4);
  }

  JudgmentFilter students;
  students.role = EvaluatorRole::student;
  const auto sqm = system_ranking(segment_sqm_scores(corpus, students), corpus, "sqm");
  REQUIRE(sqm.entries.size() == 6);
  CHECK(sqm.entries[0].system_id == "human");
  CHECK(sqm.entries[0].mean_score == doctest::Approx(5.5));
  CHECK(sqm.entries[1].mean_score == doctest::Approx(4.5));
  // DeepL and Google tie at 4.25; the smaller id comes first.
  CHECK(sqm.entries[2].system_id == "deepl");
  CHECK(sqm.entries[3].system_id == "google");
  CHECK(sqm.entries[3].mean_score == doctest::Approx(4.25));

  JudgmentFilter pros;
  pros.role = EvaluatorRole::professional;
  const auto free = system_ranking(segment_free_scores(corpus, pros), corpus, "free");
  CHECK(free.entries.front().system_id == "human");
  CHECK(free.entries.front().mean_score == doctest::Approx(2.0));
  CHECK(free.entries.back().mean_score == doctest::Approx(-4.0));
}

TEST_CASE("ranking edge cases") {
  Corpus c;
  c.paragraphs["p"] = {"p", "w", "de", "en", "Satz.", 1, Era::classic, 1900};
  c.systems["sys"] = {"sys", "Sys", SystemKind::llm, std::nullopt};
  c.segments["s"] = {"s", "p", "sys", "Sentence.", 1, std::nullopt, std::nullopt};
  const auto r = system_ranking({{"s", -2.0}}, c, "mqm");
  REQUIRE(r.entries.size() == 1);
  CHECK(r.entries[0] == RankedSystem{"sys", -2.0, 1, 1});

  Warnings warnings;
  system_ranking({{"s", -2.0}}, c, "mqm", {"sys", "ghost"}, &warnings);
  CHECK(warnings.size() == 1);
}

TEST_CASE("combined segment scores stay within [0, 6]") {
  const auto corpus = load_corpus(kFixture);
  for (double alpha : {0.0, 0.3, 0.5, 1.0}) {
    const auto scores = segment_combined_scores(corpus, alpha);
    CHECK(scores.size() == 24);
    for (const auto& [id, s] : scores) {
      CHECK(s >= 0.0);
      CHECK(s <= 6.0);
    }
  }
  JudgmentFilter pros;
  pros.role = EvaluatorRole::professional;
  CHECK(segment_mqm_scores(corpus, {}, pros).empty());
}
