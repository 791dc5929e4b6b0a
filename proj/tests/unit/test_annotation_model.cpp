#include <doctest.h>

#include <nlohmann/json.hpp>

#include "liteval/annotation_model.hpp"
#include "liteval/json_codec.hpp"
#include "liteval/unicode.hpp"

using namespace liteval;

namespace {

TranslationSegment segment(std::string text) {
  return {"seg1", "p1", "sys", std::move(text), 1, std::nullopt, std::nullopt};
}

ErrorSpan span(std::size_t start, std::size_t end, MajorCategory major, std::optional<std::string> sub,
               Severity severity) {
  return {start, end, {major, std::move(sub)}, severity, std::nullopt};
}

}  // namespace

TEST_CASE("count_severities") {
  MQMAnnotation a{"seg1", "e1", {}};
  CHECK(count_severities(a) == SeverityCounts{0, 0, 0});

  a.spans = {span(0, 1, MajorCategory::Accuracy, "omission", Severity::Major),
             span(1, 2, MajorCategory::Style, "register", Severity::Minor),
             span(2, 3, MajorCategory::Style, std::nullopt, Severity::Minor)};
  CHECK(count_severities(a) == SeverityCounts{0, 1, 2});

  a.spans = {span(0, 4, MajorCategory::NonTranslation, std::nullopt, Severity::NonTranslation)};
  CHECK(count_severities(a) == SeverityCounts{1, 0, 0});
  CHECK(count_severities(a).total() == 1);
}

TEST_CASE("validate_annotation reports field and rule") {
  const auto seg = segment("abcdef");
  MQMAnnotation a{"seg1", "e1", {}};
  CHECK(validate_annotation(a, seg).empty());

  a.spans = {span(2, 7, MajorCategory::Accuracy, "omission", Severity::Major)};
  CHECK(to_strings(validate_annotation(a, seg)) == std::vector<std::string>{"span 0: end beyond text"});

  a.spans = {span(0, 6, MajorCategory::NonTranslation, std::nullopt, Severity::Minor)};
  CHECK(to_strings(validate_annotation(a, seg)) == std::vector<std::string>{"span 0: severity mismatch"});

  a.spans = {span(0, 2, MajorCategory::Accuracy, "omission", Severity::NonTranslation)};
  CHECK(to_strings(validate_annotation(a, seg)) == std::vector<std::string>{"span 0: severity mismatch"});

  a.spans = {span(3, 3, MajorCategory::Fluency, "grammar", Severity::Minor)};
  CHECK(to_strings(validate_annotation(a, seg)) == std::vector<std::string>{"span 0: start not before end"});

  a.spans = {span(0, 1, MajorCategory::Fluency, "omission", Severity::Minor)};
  CHECK(to_strings(validate_annotation(a, seg)) ==
        std::vector<std::string>{"span 0: subcategory omission invalid for Fluency"});

  a.segment_id = "other";
  a.spans.clear();
  CHECK(to_strings(validate_annotation(a, seg)) ==
        std::vector<std::string>{"segment_id: does not match segment seg1"});
}

TEST_CASE("offsets count scalar values, not bytes") {
  const auto seg = segment("你好。再见！");
  CHECK(unicode::length(seg.text) == 6);
  MQMAnnotation a{"seg1", "e1", {span(3, 6, MajorCategory::Accuracy, "addition", Severity::Minor)}};
  CHECK(validate_annotation(a, seg).empty());
  a.spans[0].end = 7;
  CHECK_FALSE(validate_annotation(a, seg).empty());
  CHECK(unicode::slice(seg.text, 3, 6) == "再见！");
}

TEST_CASE("every listed subcategory is valid under its major") {
  for (auto major : kAllMajorCategories) {
    for (auto sub : subcategories(major)) {
      CHECK(ErrorCategory{major, std::string(sub)}.valid());
    }
    CHECK(ErrorCategory{major, std::nullopt}.valid());
  }
  CHECK(subcategories(MajorCategory::NonTranslation).empty());
  CHECK_FALSE(ErrorCategory{MajorCategory::Others, "grammar"}.valid());
}

TEST_CASE("free annotation validation") {
  const auto seg = segment("abc");
  FreeAnnotation f{"seg1", "p1", {{0, 2, Polarity::good, "nice"}, {1, 3, Polarity::error, "odd"}}};
  CHECK(validate_annotation(f, seg).empty());
  f.spans.push_back({2, 4, Polarity::error, ""});
  CHECK(to_strings(validate_annotation(f, seg)) == std::vector<std::string>{"span 2: end beyond text"});
}

TEST_CASE("validate_rating bounds") {
  CHECK(validate_rating({"s", "e", 0}).empty());
  CHECK(validate_rating({"s", "e", 6}).empty());
  CHECK(to_strings(validate_rating({"s", "e", 7})) == std::vector<std::string>{"score: out of range [0, 6]"});
  CHECK(to_strings(validate_rating({"s", "e", -1})) == std::vector<std::string>{"score: out of range [0, 6]"});
}

TEST_CASE("BWS judgment shape") {
  BWSJudgment j{"t1", {"a", "b", "c", "d"}, "a", "d", "e1"};
  CHECK(validate_judgment_shape(j).empty());

  auto same = j;
  same.worst_id = "a";
  CHECK(to_strings(validate_judgment_shape(same)) == std::vector<std::string>{"best_id: equals worst_id"});

  auto small = j;
  small.segment_ids = {"a", "b", "d"};
  CHECK(to_strings(validate_judgment_shape(small)) == std::vector<std::string>{"segment_ids: expected 4-5 segments"});

  auto outside = j;
  outside.best_id = "z";
  CHECK(to_strings(validate_judgment_shape(outside)) == std::vector<std::string>{"best_id: not in segment_ids"});

  auto mixed = validate_judgment(j, [](const std::string& id) -> std::optional<std::string> {
    return id == "d" ? "p2" : "p1";
  });
  CHECK(to_strings(mixed) == std::vector<std::string>{"segment_ids: segments from different source paragraphs"});
}

TEST_CASE("language pair keys") {
  CHECK(LanguagePair::parse("De-EN").key() == "de-en");
  CHECK_THROWS(LanguagePair::parse("en-en"));
  CHECK_THROWS(LanguagePair::parse("english"));
}

TEST_CASE("JSON round trip of judgment records") {
  MQMAnnotation a{"seg1", "e1",
                  {span(0, 3, MajorCategory::Accuracy, "mistranslation_overly_literal", Severity::Major),
                   span(0, 9, MajorCategory::NonTranslation, std::nullopt, Severity::NonTranslation)}};
  a.spans[0].comment = "too literal";
  nlohmann::json j = a;
  CHECK(j["spans"][0]["severity"] == "Major");
  CHECK(j["spans"][0]["category"]["major"] == "Accuracy");
  CHECK_FALSE(j["spans"][1]["category"].contains("sub"));
  CHECK(j.get<MQMAnnotation>() == a);

  FreeAnnotation f{"seg1", "p1", {{1, 2, Polarity::good, "vivid"}}};
  CHECK(nlohmann::json(f).get<FreeAnnotation>() == f);

  BWSJudgment b{"t1", {"a", "b", "c", "d", "e"}, "c", "e", "e1"};
  CHECK(nlohmann::json(b).get<BWSJudgment>() == b);

  Evaluator e{"s1", EvaluatorRole::student, {"de", "en"}};
  CHECK(nlohmann::json(e).get<Evaluator>() == e);
  CHECK(nlohmann::json::parse(R"({"id":"s1","role":"student","pair":"de-en"})").get<Evaluator>() == e);
}

TEST_CASE("JSON rejects malformed spans") {
  CHECK_THROWS(nlohmann::json::parse(R"({"start":-1,"end":2,"category":{"major":"Style"},"severity":"Minor"})")
                   .get<ErrorSpan>());
  CHECK_THROWS(nlohmann::json::parse(R"({"start":0,"end":2,"category":{"major":"Styl"},"severity":"Minor"})")
                   .get<ErrorSpan>());
  CHECK_THROWS(nlohmann::json::parse(R"({"start":0,"end":2,"category":{"major":"Style"},"severity":"Huge"})")
                   .get<ErrorSpan>());
}

TEST_CASE("UTF-8 decoding of malformed input") {
  CHECK(unicode::length("a\xff" "b") == 3);
  CHECK(unicode::decode("\xe4\xbd") == std::u32string{0xFFFD, 0xFFFD});
  CHECK(unicode::encode(unicode::decode("Grüße, 世界")) == "Grüße, 世界");
}
