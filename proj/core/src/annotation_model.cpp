#include "liteval/annotation_model.hpp"

#include <algorithm>
#include <array>
#include <set>
#include <stdexcept>

#include "liteval/unicode.hpp"

namespace liteval {

namespace {

constexpr std::array<std::string_view, 7> kAccuracySubs = {
    "addition",
    "omission",
    "misnomer",
    "mistranslation_general",
    "mistranslation_overly_literal",
    "mistranslation_temporal",
    "untranslated",
};
constexpr std::array<std::string_view, 4> kFluencySubs = {
    "punctuation_spelling", "grammar", "inconsistency", "coherence"};
constexpr std::array<std::string_view, 4> kStyleSubs = {
    "awkwardness", "register", "inconsistent", "unidiomatic"};
constexpr std::array<std::string_view, 2> kTerminologySubs = {"mistranslation",
                                                              "inconsistent"};
constexpr std::array<std::string_view, 2> kLocaleSubs = {"location_format",
                                                         "number_format"};

template <class Enum, std::size_t N>
std::optional<Enum> lookup(std::string_view s,
                           const std::array<std::pair<std::string_view, Enum>, N>& table) {
  for (const auto& [name, value] : table) {
    if (name == s) return value;
  }
  return std::nullopt;
}

template <class Enum, std::size_t N>
std::string_view name_of(Enum v,
                         const std::array<std::pair<std::string_view, Enum>, N>& table) {
  for (const auto& [name, value] : table) {
    if (value == v) return name;
  }
  return "?";
}

constexpr std::array<std::pair<std::string_view, MajorCategory>, 7> kMajorNames = {{
    {"Accuracy", MajorCategory::Accuracy},
    {"Fluency", MajorCategory::Fluency},
    {"Style", MajorCategory::Style},
    {"Terminology", MajorCategory::Terminology},
    {"LocaleConvention", MajorCategory::LocaleConvention},
    {"NonTranslation", MajorCategory::NonTranslation},
    {"Others", MajorCategory::Others},
}};

constexpr std::array<std::pair<std::string_view, Severity>, 3> kSeverityNames = {{
    {"Minor", Severity::Minor},
    {"Major", Severity::Major},
    {"NonTranslation", Severity::NonTranslation},
}};

constexpr std::array<std::pair<std::string_view, SystemKind>, 4> kKindNames = {{
    {"human", SystemKind::human},
    {"commercial", SystemKind::commercial},
    {"nmt", SystemKind::nmt},
    {"llm", SystemKind::llm},
}};

constexpr std::array<std::pair<std::string_view, Era>, 2> kEraNames = {{
    {"classic", Era::classic},
    {"contemporary", Era::contemporary},
}};

constexpr std::array<std::pair<std::string_view, Polarity>, 2> kPolarityNames = {{
    {"good", Polarity::good},
    {"error", Polarity::error},
}};

constexpr std::array<std::pair<std::string_view, EvaluatorRole>, 2> kRoleNames = {{
    {"student", EvaluatorRole::student},
    {"professional", EvaluatorRole::professional},
}};

template <class SpanT>
void check_offsets(const std::vector<SpanT>& spans, std::size_t text_length,
                   std::vector<Violation>& out) {
  for (std::size_t i = 0; i < spans.size(); ++i) {
    const auto field = "span " + std::to_string(i);
    if (spans[i].start >= spans[i].end) out.push_back({field, "start not before end"});
    if (spans[i].end > text_length) out.push_back({field, "end beyond text"});
  }
}

}  // namespace

LanguagePair LanguagePair::parse(std::string_view key) {
  const auto dash = key.find('-');
  if (dash == std::string_view::npos || dash == 0 || dash + 1 == key.size()) {
    throw std::invalid_argument("language pair must look like 'de-en': " + std::string(key));
  }
  LanguagePair p{std::string(key.substr(0, dash)), std::string(key.substr(dash + 1))};
  auto lower = [](std::string& s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  };
  lower(p.source_lang);
  lower(p.target_lang);
  if (p.source_lang == p.target_lang) {
    throw std::invalid_argument("language pair needs two different languages: " +
                                std::string(key));
  }
  return p;
}

std::string_view to_string(MajorCategory c) { return name_of(c, kMajorNames); }
std::optional<MajorCategory> parse_major_category(std::string_view s) {
  return lookup(s, kMajorNames);
}

std::span<const std::string_view> subcategories(MajorCategory major) {
  switch (major) {
    case MajorCategory::Accuracy: return kAccuracySubs;
    case MajorCategory::Fluency: return kFluencySubs;
    case MajorCategory::Style: return kStyleSubs;
    case MajorCategory::Terminology: return kTerminologySubs;
    case MajorCategory::LocaleConvention: return kLocaleSubs;
    case MajorCategory::NonTranslation:
    case MajorCategory::Others: return {};
  }
  return {};
}

bool ErrorCategory::valid() const {
  const auto subs = subcategories(major);
  if (!sub) return true;
  return std::find(subs.begin(), subs.end(), *sub) != subs.end();
}

std::string_view to_string(Severity s) { return name_of(s, kSeverityNames); }
std::optional<Severity> parse_severity(std::string_view s) {
  return lookup(s, kSeverityNames);
}

std::string_view to_string(SystemKind k) { return name_of(k, kKindNames); }
std::string_view to_string(Era e) { return name_of(e, kEraNames); }
std::string_view to_string(Polarity p) { return name_of(p, kPolarityNames); }
std::string_view to_string(EvaluatorRole r) { return name_of(r, kRoleNames); }
std::optional<SystemKind> parse_system_kind(std::string_view s) { return lookup(s, kKindNames); }
std::optional<Era> parse_era(std::string_view s) { return lookup(s, kEraNames); }
std::optional<Polarity> parse_polarity(std::string_view s) { return lookup(s, kPolarityNames); }
std::optional<EvaluatorRole> parse_role(std::string_view s) { return lookup(s, kRoleNames); }

SeverityCounts count_severities(const MQMAnnotation& annotation) {
  SeverityCounts c;
  for (const auto& span : annotation.spans) {
    switch (span.severity) {
      case Severity::NonTranslation: ++c.non_translation; break;
      case Severity::Major: ++c.major; break;
      case Severity::Minor: ++c.minor; break;
    }
  }
  return c;
}

std::vector<Violation> validate_annotation(const MQMAnnotation& annotation,
                                           const TranslationSegment& segment) {
  std::vector<Violation> out;
  if (annotation.segment_id != segment.id) {
    out.push_back({"segment_id", "does not match segment " + segment.id});
  }
  if (annotation.evaluator_id.empty()) out.push_back({"evaluator_id", "empty"});
  check_offsets(annotation.spans, unicode::length(segment.text), out);
  for (std::size_t i = 0; i < annotation.spans.size(); ++i) {
    const auto& span = annotation.spans[i];
    const auto field = "span " + std::to_string(i);
    const bool nt_category = span.category.major == MajorCategory::NonTranslation;
    const bool nt_severity = span.severity == Severity::NonTranslation;
    if (nt_category != nt_severity) out.push_back({field, "severity mismatch"});
    if (!span.category.valid()) {
      out.push_back({field, "subcategory " + *span.category.sub + " invalid for " +
                                std::string(to_string(span.category.major))});
    }
  }
  return out;
}

std::vector<Violation> validate_annotation(const FreeAnnotation& annotation,
                                           const TranslationSegment& segment) {
  std::vector<Violation> out;
  if (annotation.segment_id != segment.id) {
    out.push_back({"segment_id", "does not match segment " + segment.id});
  }
  if (annotation.evaluator_id.empty()) out.push_back({"evaluator_id", "empty"});
  check_offsets(annotation.spans, unicode::length(segment.text), out);
  return out;
}

std::vector<Violation> validate_rating(const SQMRating& rating) {
  std::vector<Violation> out;
  if (rating.segment_id.empty()) out.push_back({"segment_id", "empty"});
  if (rating.evaluator_id.empty()) out.push_back({"evaluator_id", "empty"});
  if (rating.score < SQMRating::kMin || rating.score > SQMRating::kMax) {
    out.push_back({"score", "out of range [0, 6]"});
  }
  return out;
}

std::vector<Violation> validate_judgment_shape(const BWSJudgment& judgment) {
  std::vector<Violation> out;
  const auto& ids = judgment.segment_ids;
  if (ids.size() < 4 || ids.size() > 5) {
    out.push_back({"segment_ids", "expected 4-5 segments"});
  }
  if (std::set<std::string>(ids.begin(), ids.end()).size() != ids.size()) {
    out.push_back({"segment_ids", "duplicate segment"});
  }
  if (judgment.best_id == judgment.worst_id) out.push_back({"best_id", "equals worst_id"});
  auto member = [&](const std::string& id) {
    return std::find(ids.begin(), ids.end(), id) != ids.end();
  };
  if (!member(judgment.best_id)) out.push_back({"best_id", "not in segment_ids"});
  if (!member(judgment.worst_id)) out.push_back({"worst_id", "not in segment_ids"});
  if (judgment.evaluator_id.empty()) out.push_back({"evaluator_id", "empty"});
  if (judgment.tuple_id.empty()) out.push_back({"tuple_id", "empty"});
  return out;
}

std::vector<std::string> to_strings(std::span<const Violation> violations) {
  std::vector<std::string> out;
  out.reserve(violations.size());
  for (const auto& v : violations) out.push_back(v.to_string());
  return out;
}

}  // namespace liteval
