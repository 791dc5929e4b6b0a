#pragma once
// On-disk corpus format and loaders.
//
// A corpus directory holds one JSONL file per record type (paragraphs,
// segments, systems, evaluators, mqm, sqm, bws, free). Every line is a JSON
// object whose keys are the field names of the matching model type. Metric
// scores produced by external scorers arrive as CSV.

#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "liteval/annotation_model.hpp"

namespace liteval {

class CorpusError : public std::runtime_error {
 public:
  enum class Kind { parse, reference, duplicate, io, empty_text };

  CorpusError(Kind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  Kind kind() const noexcept { return kind_; }

 private:
  Kind kind_;
};

struct Corpus {
  std::map<std::string, SourceParagraph> paragraphs;
  std::map<std::string, TranslationSegment> segments;
  std::map<std::string, System> systems;
  std::map<std::string, Evaluator> evaluators;
  std::vector<MQMAnnotation> mqm;
  std::vector<SQMRating> sqm;
  std::vector<BWSJudgment> bws;
  std::vector<FreeAnnotation> free;

  // Throwing lookups; CorpusError::Kind::reference on unknown ids.
  const TranslationSegment& segment(const std::string& id) const;
  const SourceParagraph& paragraph(const std::string& id) const;
  const SourceParagraph& paragraph_of(const std::string& segment_id) const;
  const System& system_of(const std::string& segment_id) const;
  LanguagePair pair_of(const std::string& segment_id) const;

  // Segment ids grouped by their source paragraph, in id order.
  std::map<std::string, std::vector<std::string>> segments_by_paragraph() const;
  std::set<LanguagePair> language_pairs() const;

  // Checks every cross-reference and model invariant; throws CorpusError.
  void validate() const;

  bool operator==(const Corpus&) const = default;
};

inline constexpr std::string_view kCorpusFiles[] = {
    "paragraphs.jsonl", "segments.jsonl", "systems.jsonl", "evaluators.jsonl",
    "mqm.jsonl",        "sqm.jsonl",      "bws.jsonl",     "free.jsonl",
};
// Files that must exist; judgment files default to empty.
inline constexpr std::string_view kRequiredCorpusFiles[] = {
    "paragraphs.jsonl", "segments.jsonl", "systems.jsonl", "evaluators.jsonl"};

Corpus load_corpus(const std::filesystem::path& dir);
void save_corpus(const Corpus& corpus, const std::filesystem::path& dir);

// Judgment files only; used by the review service export.
void save_judgments(const std::vector<MQMAnnotation>& mqm, const std::vector<SQMRating>& sqm,
                    const std::vector<BWSJudgment>& bws, const std::vector<FreeAnnotation>& free,
                    const std::filesystem::path& dir);

struct PairStats {
  std::string pair;  // "de-en", or "total"
  std::size_t paragraph_count = 0;
  std::size_t segment_count = 0;
  std::size_t sentence_count = 0;  // target-side sentences
  double mean_source_sentences = 0.0;
  double mean_target_sentences = 0.0;
};

struct CorpusStats {
  std::vector<PairStats> pairs;  // sorted by pair key
  PairStats total;
};

CorpusStats corpus_stats(const Corpus& corpus);

std::vector<std::string> default_abbreviations();

// Fallback splitter for files that omit sentence_count.
int count_sentences(std::string_view text, std::string_view language);
int count_sentences(std::string_view text, std::string_view language,
                    const std::vector<std::string>& abbreviations);

struct MetricScore {
  std::string segment_id;
  std::string metric_id;
  double value = 0.0;

  bool operator==(const MetricScore&) const = default;
};

struct MetricImport {
  std::vector<MetricScore> scores;
  std::vector<std::string> warnings;
};

// CSV with a header naming segment_id, metric_id, value (any column order).
// Duplicate (segment, metric) rows keep the last value and add a warning.
MetricImport import_metric_scores(const std::filesystem::path& csv, const Corpus& corpus);
MetricImport import_metric_scores(std::istream& csv, const Corpus& corpus);

// metric_id -> segment_id -> value
std::map<std::string, std::map<std::string, double>> by_metric(
    const std::vector<MetricScore>& scores);

}  // namespace liteval
