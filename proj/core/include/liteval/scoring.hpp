#pragma once
// Numeric scores from judgment records, and per-system rankings.

#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "liteval/annotation_model.hpp"
#include "liteval/corpus_io.hpp"

namespace liteval {

using Warnings = std::vector<std::string>;

// segment_id -> score
using SegmentScores = std::map<std::string, double>;

struct SeverityWeights {
  double non_translation = 25.0;
  double major = 5.0;
  double minor = 1.0;

  // Throws std::invalid_argument unless all > 0 and nt >= major >= minor.
  void validate() const;
  // "25,5,1"
  static SeverityWeights parse(std::string_view csv);
};

double mqm_score(const SeverityCounts& counts, int sentence_count,
                 const SeverityWeights& weights = {});
double mqm_score(const MQMAnnotation& annotation, int sentence_count,
                 const SeverityWeights& weights = {});

// Affine map of [min, max] onto [lo, hi]. All-equal input maps every value
// to the midpoint and records a warning.
std::vector<double> minmax_scale(std::span<const double> scores, double lo, double hi,
                                 Warnings* warnings = nullptr);

// (1 - alpha) * mqm_scaled + alpha * sqm; alpha in [0, 1].
double combined_score(double mqm_scaled, double sqm, double alpha);

// |good| - |error|
int free_annotation_score(const FreeAnnotation& annotation);

// Which judgments feed a segment score. Empty sets / nullopt mean "any".
struct JudgmentFilter {
  std::optional<EvaluatorRole> role;
  std::set<std::string> evaluator_ids;
  std::optional<LanguagePair> pair;

  bool accepts(const Corpus& corpus, const std::string& evaluator_id,
               const std::string& segment_id) const;
};

// Segment scores averaged over every accepted evaluator of the segment.
SegmentScores segment_mqm_scores(const Corpus& corpus, const SeverityWeights& weights = {},
                                 const JudgmentFilter& filter = {});
SegmentScores segment_sqm_scores(const Corpus& corpus, const JudgmentFilter& filter = {});
SegmentScores segment_free_scores(const Corpus& corpus, const JudgmentFilter& filter = {});
// MQM is min-max scaled onto [0, 6] over the segments that carry both
// schemes, then combined with SQM.
SegmentScores segment_combined_scores(const Corpus& corpus, double alpha,
                                      const SeverityWeights& weights = {},
                                      const JudgmentFilter& filter = {},
                                      Warnings* warnings = nullptr);

// evaluator_id -> segment_id -> score, one entry per judgment.
std::map<std::string, SegmentScores> mqm_scores_by_evaluator(const Corpus& corpus,
                                                             const SeverityWeights& weights = {});
std::map<std::string, SegmentScores> sqm_scores_by_evaluator(const Corpus& corpus);

struct RankedSystem {
  std::string system_id;
  double mean_score = 0.0;
  int rank = 0;
  std::size_t n_segments = 0;

  bool operator==(const RankedSystem&) const = default;
};

struct SystemRanking {
  std::string scheme;
  std::vector<RankedSystem> entries;  // rank order
};

// Mean score per system, sorted descending; ties go to the smaller system id.
// Systems listed in `requested` without any score are dropped with a warning.
SystemRanking system_ranking(const SegmentScores& scores, const Corpus& corpus,
                             std::string scheme,
                             const std::vector<std::string>& requested = {},
                             Warnings* warnings = nullptr);

}  // namespace liteval
