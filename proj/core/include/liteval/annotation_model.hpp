#pragma once
// Domain model shared by every liteval module: corpus entities, the MQM
// error taxonomy, and the four kinds of human judgment records.
//
// All types are plain value objects. Span offsets are Unicode scalar-value
// indices into the segment text, half-open [start, end).

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace liteval {

struct LanguagePair {
  std::string source_lang;
  std::string target_lang;

  // "de-en" style key.
  std::string key() const { return source_lang + "-" + target_lang; }
  static LanguagePair parse(std::string_view key);

  bool operator==(const LanguagePair&) const = default;
  auto operator<=>(const LanguagePair&) const = default;
};

enum class SystemKind { human, commercial, nmt, llm };

struct System {
  std::string id;
  std::string display_name;
  SystemKind kind = SystemKind::llm;
  std::optional<double> param_count_billions;

  bool operator==(const System&) const = default;
};

enum class Era { classic, contemporary };

struct SourceParagraph {
  std::string id;
  std::string work_id;
  std::string language;         // source language code
  std::string target_language;  // pair this paragraph was released under
  std::string text;
  int sentence_count = 1;
  Era era = Era::classic;
  int publication_year = 0;

  LanguagePair pair() const { return {language, target_language}; }
  bool operator==(const SourceParagraph&) const = default;
};

struct TranslationSegment {
  std::string id;
  std::string source_id;
  std::string system_id;
  std::string text;
  int sentence_count = 1;
  std::optional<int> translation_year;
  // Distinguishes several human translations of one paragraph.
  std::optional<int> version;

  bool operator==(const TranslationSegment&) const = default;
};

enum class MajorCategory {
  Accuracy,
  Fluency,
  Style,
  Terminology,
  LocaleConvention,
  NonTranslation,
  Others,
};

inline constexpr MajorCategory kAllMajorCategories[] = {
    MajorCategory::Accuracy,         MajorCategory::Fluency,
    MajorCategory::Style,            MajorCategory::Terminology,
    MajorCategory::LocaleConvention, MajorCategory::NonTranslation,
    MajorCategory::Others,
};

std::string_view to_string(MajorCategory c);
std::optional<MajorCategory> parse_major_category(std::string_view s);

// Sub-categories allowed under `major` (empty for NonTranslation / Others).
std::span<const std::string_view> subcategories(MajorCategory major);

struct ErrorCategory {
  MajorCategory major = MajorCategory::Others;
  std::optional<std::string> sub;

  bool valid() const;
  bool operator==(const ErrorCategory&) const = default;
};

enum class Severity { Minor, Major, NonTranslation };

std::string_view to_string(Severity s);
std::optional<Severity> parse_severity(std::string_view s);

// Higher is more severe.
constexpr int severity_rank(Severity s) {
  switch (s) {
    case Severity::NonTranslation: return 2;
    case Severity::Major: return 1;
    case Severity::Minor: return 0;
  }
  return 0;
}

struct ErrorSpan {
  std::size_t start = 0;
  std::size_t end = 0;
  ErrorCategory category;
  Severity severity = Severity::Minor;
  std::optional<std::string> comment;

  bool operator==(const ErrorSpan&) const = default;
};

struct MQMAnnotation {
  std::string segment_id;
  std::string evaluator_id;
  std::vector<ErrorSpan> spans;

  bool operator==(const MQMAnnotation&) const = default;
};

struct SQMRating {
  std::string segment_id;
  std::string evaluator_id;
  int score = 0;

  static constexpr int kMin = 0;
  static constexpr int kMax = 6;
  bool operator==(const SQMRating&) const = default;
};

struct BWSJudgment {
  std::string tuple_id;
  std::vector<std::string> segment_ids;
  std::string best_id;
  std::string worst_id;
  std::string evaluator_id;

  bool operator==(const BWSJudgment&) const = default;
};

enum class Polarity { good, error };

struct FreeSpan {
  std::size_t start = 0;
  std::size_t end = 0;
  Polarity polarity = Polarity::error;
  std::string comment;

  bool operator==(const FreeSpan&) const = default;
};

struct FreeAnnotation {
  std::string segment_id;
  std::string evaluator_id;
  std::vector<FreeSpan> spans;

  bool operator==(const FreeAnnotation&) const = default;
};

enum class EvaluatorRole { student, professional };

struct Evaluator {
  std::string id;
  EvaluatorRole role = EvaluatorRole::student;
  LanguagePair pair;

  bool operator==(const Evaluator&) const = default;
};

struct SeverityCounts {
  std::size_t non_translation = 0;
  std::size_t major = 0;
  std::size_t minor = 0;

  std::size_t total() const { return non_translation + major + minor; }
  bool operator==(const SeverityCounts&) const = default;
};

SeverityCounts count_severities(const MQMAnnotation& annotation);

// A broken invariant, rendered as "<field>: <rule>".
struct Violation {
  std::string field;
  std::string rule;

  std::string to_string() const { return field + ": " + rule; }
  bool operator==(const Violation&) const = default;
};

// Empty result means the record satisfies every model invariant.
std::vector<Violation> validate_annotation(const MQMAnnotation& annotation,
                                           const TranslationSegment& segment);
std::vector<Violation> validate_annotation(const FreeAnnotation& annotation,
                                           const TranslationSegment& segment);
std::vector<Violation> validate_rating(const SQMRating& rating);
// `source_of` maps each member segment id to its source paragraph id and
// returns nullopt for unknown segments.
template <class SourceLookup>
std::vector<Violation> validate_judgment(const BWSJudgment& judgment,
                                         SourceLookup&& source_of);
std::vector<Violation> validate_judgment_shape(const BWSJudgment& judgment);

std::vector<std::string> to_strings(std::span<const Violation> violations);

std::string_view to_string(SystemKind k);
std::string_view to_string(Era e);
std::string_view to_string(Polarity p);
std::string_view to_string(EvaluatorRole r);
std::optional<SystemKind> parse_system_kind(std::string_view s);
std::optional<Era> parse_era(std::string_view s);
std::optional<Polarity> parse_polarity(std::string_view s);
std::optional<EvaluatorRole> parse_role(std::string_view s);

template <class SourceLookup>
std::vector<Violation> validate_judgment(const BWSJudgment& judgment,
                                         SourceLookup&& source_of) {
  auto out = validate_judgment_shape(judgment);
  std::optional<std::string> shared;
  for (const auto& id : judgment.segment_ids) {
    std::optional<std::string> src = source_of(id);
    if (!src) {
      out.push_back({"segment_ids", "unknown segment " + id});
      continue;
    }
    if (!shared) {
      shared = *src;
    } else if (*shared != *src) {
      out.push_back({"segment_ids", "segments from different source paragraphs"});
      break;
    }
  }
  return out;
}

}  // namespace liteval
