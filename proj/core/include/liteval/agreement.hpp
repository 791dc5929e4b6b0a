#pragma once
// Pairwise inter-annotator agreement: rank correlations for scalar scores,
// Cohen's kappa for categorical labels, and the span/label match statistics
// built on per-character labelings.

#include <cmath>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "liteval/annotation_model.hpp"
#include "liteval/corpus_io.hpp"
#include "liteval/scoring.hpp"

namespace liteval {

class AgreementError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Tau-b with tie correction, O(n log n). Throws AgreementError on length
// mismatch, n < 2, or when either side is entirely tied.
double kendall_tau_b(std::span<const double> x, std::span<const double> y);

// Pearson correlation of average ranks.
double spearman_rho(std::span<const double> x, std::span<const double> y);

double pearson_r(std::span<const double> x, std::span<const double> y);

// Average (fractional) ranks, 1-based.
std::vector<double> average_ranks(std::span<const double> x);

// (p_o - p_e) / (1 - p_e) with empirical marginals. When p_e == 1 (both
// raters constant on the same label) the result is 1.0 by convention.
template <class Label>
double cohen_kappa(std::span<const Label> a, std::span<const Label> b) {
  if (a.size() != b.size()) throw AgreementError("cohen_kappa: length mismatch");
  if (a.empty()) throw AgreementError("cohen_kappa: no items");
  std::map<Label, std::pair<double, double>> marginals;
  double agree = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] == b[i]) agree += 1.0;
    marginals[a[i]].first += 1.0;
    marginals[b[i]].second += 1.0;
  }
  const double n = static_cast<double>(a.size());
  const double p_o = agree / n;
  double p_e = 0.0;
  for (const auto& [label, counts] : marginals) p_e += (counts.first / n) * (counts.second / n);
  if (p_e >= 1.0) return 1.0;
  return (p_o - p_e) / (1.0 - p_e);
}

template <class Label>
double cohen_kappa(const std::vector<Label>& a, const std::vector<Label>& b) {
  return cohen_kappa(std::span<const Label>(a), std::span<const Label>(b));
}

enum class SpanMode { binary, category };

inline constexpr std::string_view kNoneLabel = "none";
inline constexpr std::string_view kErrorLabel = "error";

// Per-character labels for an MQM annotation of a text of `text_length`
// scalar values. Overlaps resolve to the more severe span, then the earlier.
std::vector<std::string> span_unit_labels(std::size_t text_length,
                                          const MQMAnnotation& annotation, SpanMode mode);
std::vector<std::string> span_unit_labels(const TranslationSegment& segment,
                                          const MQMAnnotation& annotation, SpanMode mode);
// Free annotations contribute their error-polarity spans; category mode has
// no categories to offer, so both modes label them "error".
std::vector<std::string> span_unit_labels(std::size_t text_length,
                                          const FreeAnnotation& annotation);

double span_match_kappa(const MQMAnnotation& a, const MQMAnnotation& b,
                        const TranslationSegment& segment, SpanMode mode);

// Judgment labels of one tuple member.
enum class BwsLabel { best, worst, neither };

// Every (tuple, segment) is one item. Both evaluators must have judged the
// same tuple set; AgreementError otherwise.
double bws_agreement(std::span<const BWSJudgment> a, std::span<const BWSJudgment> b);

enum class AgreementScheme { mqm, sqm, bws, span, free_span };

struct AgreementReport {
  LanguagePair pair;
  std::string statistic;  // "kendall_tau_b" or "cohen_kappa"
  double value = 0.0;
  std::size_t n_items = 0;
};

// Agreement of two evaluators on everything they both judged, one report per
// language pair of the judged segments. Span schemes pool characters across
// the shared segments. `free_span` compares evaluator a's MQM spans with
// evaluator b's free-annotation error spans.
std::vector<AgreementReport> pairwise_agreement(const Corpus& corpus,
                                                const std::string& evaluator_a,
                                                const std::string& evaluator_b,
                                                AgreementScheme scheme,
                                                SpanMode mode = SpanMode::binary,
                                                const SeverityWeights& weights = {});

// Evaluator pairs (a < b) of the given role who share at least two items
// under the scheme.
std::vector<std::pair<std::string, std::string>> agreement_pairs(const Corpus& corpus,
                                                                 AgreementScheme scheme,
                                                                 EvaluatorRole role);

struct AgreementSummary {
  std::vector<AgreementReport> per_pair;  // value = mean over evaluator pairs
  double mean = 0.0;                      // mean of the per-pair values
  std::vector<std::string> warnings;      // skipped degenerate evaluator pairs
};

// Every evaluator pair of `role` from agreement_pairs, averaged per language
// pair. Not defined for free_span.
AgreementSummary agreement_summary(const Corpus& corpus, AgreementScheme scheme, EvaluatorRole role,
                                   SpanMode mode = SpanMode::binary,
                                   const SeverityWeights& weights = {});

}  // namespace liteval
