#include "liteval/json_codec.hpp"

#include <stdexcept>

namespace liteval {

using nlohmann::json;

namespace {

template <class T>
void put_optional(json& j, const char* key, const std::optional<T>& v) {
  if (v) j[key] = *v;
}

template <class T>
void get_optional(const json& j, const char* key, std::optional<T>& v) {
  if (auto it = j.find(key); it != j.end() && !it->is_null()) {
    v = it->get<T>();
  } else {
    v.reset();
  }
}

template <class Enum, class Parser>
Enum get_enum(const json& j, const char* key, Parser parse) {
  const auto s = j.at(key).get<std::string>();
  auto v = parse(s);
  if (!v) throw std::invalid_argument(std::string("bad value for ") + key + ": " + s);
  return *v;
}

std::size_t get_offset(const json& j, const char* key) {
  const auto& v = j.at(key);
  if (!v.is_number_integer() || v.get<long long>() < 0) {
    throw std::invalid_argument(std::string(key) + " must be a non-negative integer");
  }
  return v.get<std::size_t>();
}

}  // namespace

void to_json(json& j, const System& v) {
  j = json{{"id", v.id}, {"display_name", v.display_name}, {"kind", to_string(v.kind)}};
  put_optional(j, "param_count_billions", v.param_count_billions);
}
void from_json(const json& j, System& v) {
  v.id = j.at("id").get<std::string>();
  v.display_name = j.value("display_name", v.id);
  v.kind = get_enum<SystemKind>(j, "kind", parse_system_kind);
  get_optional(j, "param_count_billions", v.param_count_billions);
}

void to_json(json& j, const SourceParagraph& v) {
  j = json{{"id", v.id},
           {"work_id", v.work_id},
           {"language", v.language},
           {"target_language", v.target_language},
           {"text", v.text},
           {"sentence_count", v.sentence_count},
           {"era", to_string(v.era)},
           {"publication_year", v.publication_year}};
}
void from_json(const json& j, SourceParagraph& v) {
  v.id = j.at("id").get<std::string>();
  v.work_id = j.at("work_id").get<std::string>();
  v.language = j.at("language").get<std::string>();
  v.target_language = j.at("target_language").get<std::string>();
  v.text = j.at("text").get<std::string>();
  // 0 marks "not supplied"; the loader fills it in.
  v.sentence_count = j.value("sentence_count", 0);
  v.era = get_enum<Era>(j, "era", parse_era);
  v.publication_year = j.at("publication_year").get<int>();
}

void to_json(json& j, const TranslationSegment& v) {
  j = json{{"id", v.id},
           {"source_id", v.source_id},
           {"system_id", v.system_id},
           {"text", v.text},
           {"sentence_count", v.sentence_count}};
  put_optional(j, "translation_year", v.translation_year);
  put_optional(j, "version", v.version);
}
void from_json(const json& j, TranslationSegment& v) {
  v.id = j.at("id").get<std::string>();
  v.source_id = j.at("source_id").get<std::string>();
  v.system_id = j.at("system_id").get<std::string>();
  v.text = j.at("text").get<std::string>();
  v.sentence_count = j.value("sentence_count", 0);
  get_optional(j, "translation_year", v.translation_year);
  get_optional(j, "version", v.version);
}

void to_json(json& j, const Evaluator& v) {
  j = json{{"id", v.id},
           {"role", to_string(v.role)},
           {"pair", {{"source_lang", v.pair.source_lang}, {"target_lang", v.pair.target_lang}}}};
}
void from_json(const json& j, Evaluator& v) {
  v.id = j.at("id").get<std::string>();
  v.role = get_enum<EvaluatorRole>(j, "role", parse_role);
  const auto& p = j.at("pair");
  if (p.is_string()) {
    v.pair = LanguagePair::parse(p.get<std::string>());
  } else {
    v.pair.source_lang = p.at("source_lang").get<std::string>();
    v.pair.target_lang = p.at("target_lang").get<std::string>();
  }
}

void to_json(json& j, const ErrorCategory& v) {
  j = json{{"major", to_string(v.major)}};
  put_optional(j, "sub", v.sub);
}
void from_json(const json& j, ErrorCategory& v) {
  v.major = get_enum<MajorCategory>(j, "major", parse_major_category);
  get_optional(j, "sub", v.sub);
}

void to_json(json& j, const ErrorSpan& v) {
  j = json{{"start", v.start},
           {"end", v.end},
           {"category", v.category},
           {"severity", to_string(v.severity)}};
  put_optional(j, "comment", v.comment);
}
void from_json(const json& j, ErrorSpan& v) {
  v.start = get_offset(j, "start");
  v.end = get_offset(j, "end");
  v.category = j.at("category").get<ErrorCategory>();
  v.severity = get_enum<Severity>(j, "severity", parse_severity);
  get_optional(j, "comment", v.comment);
}

void to_json(json& j, const MQMAnnotation& v) {
  j = json{{"segment_id", v.segment_id}, {"evaluator_id", v.evaluator_id}, {"spans", v.spans}};
}
void from_json(const json& j, MQMAnnotation& v) {
  v.segment_id = j.at("segment_id").get<std::string>();
  v.evaluator_id = j.at("evaluator_id").get<std::string>();
  v.spans = j.at("spans").get<std::vector<ErrorSpan>>();
}

void to_json(json& j, const SQMRating& v) {
  j = json{{"segment_id", v.segment_id}, {"evaluator_id", v.evaluator_id}, {"score", v.score}};
}
void from_json(const json& j, SQMRating& v) {
  v.segment_id = j.at("segment_id").get<std::string>();
  v.evaluator_id = j.at("evaluator_id").get<std::string>();
  const auto& s = j.at("score");
  if (!s.is_number_integer()) throw std::invalid_argument("score must be an integer");
  v.score = s.get<int>();
}

void to_json(json& j, const BWSJudgment& v) {
  j = json{{"tuple_id", v.tuple_id},
           {"segment_ids", v.segment_ids},
           {"best_id", v.best_id},
           {"worst_id", v.worst_id},
           {"evaluator_id", v.evaluator_id}};
}
void from_json(const json& j, BWSJudgment& v) {
  v.tuple_id = j.at("tuple_id").get<std::string>();
  v.segment_ids = j.at("segment_ids").get<std::vector<std::string>>();
  v.best_id = j.at("best_id").get<std::string>();
  v.worst_id = j.at("worst_id").get<std::string>();
  v.evaluator_id = j.at("evaluator_id").get<std::string>();
}

void to_json(json& j, const FreeSpan& v) {
  j = json{{"start", v.start},
           {"end", v.end},
           {"polarity", to_string(v.polarity)},
           {"comment", v.comment}};
}
void from_json(const json& j, FreeSpan& v) {
  v.start = get_offset(j, "start");
  v.end = get_offset(j, "end");
  v.polarity = get_enum<Polarity>(j, "polarity", parse_polarity);
  v.comment = j.value("comment", std::string());
}

void to_json(json& j, const FreeAnnotation& v) {
  j = json{{"segment_id", v.segment_id}, {"evaluator_id", v.evaluator_id}, {"spans", v.spans}};
}
void from_json(const json& j, FreeAnnotation& v) {
  v.segment_id = j.at("segment_id").get<std::string>();
  v.evaluator_id = j.at("evaluator_id").get<std::string>();
  v.spans = j.at("spans").get<std::vector<FreeSpan>>();
}

}  // namespace liteval
