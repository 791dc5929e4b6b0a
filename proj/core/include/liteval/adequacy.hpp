#pragma once
// How often human translations beat machine output under a scheme.

#include <map>
#include <optional>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "liteval/corpus_io.hpp"
#include "liteval/scoring.hpp"

namespace liteval {

class AdequacyError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum class Scenario { vs_top_systems, vs_other_systems };

std::string_view to_string(Scenario s);

// joint_strict: a paragraph counts when the best human version beats every
// rival strictly. pairwise: every (paragraph, rival) comparison counts once.
enum class PreferenceMode { joint_strict, pairwise };

std::string_view to_string(PreferenceMode m);

struct PreferenceReport {
  std::string pair;    // language pair key, or "mean"
  std::string scheme;
  Scenario scenario = Scenario::vs_top_systems;
  double percentage = 0.0;
  std::size_t n_paragraphs = 0;
  std::size_t preferred = 0;    // paragraphs (joint) or comparisons (pairwise) won
  std::size_t comparisons = 0;  // denominator
};

// Ties count against the human side. Paragraphs with a human score but no
// scored rival are skipped; a paragraph with scored rivals but no scored human
// segment is an AdequacyError.
PreferenceReport preference_rate(const SegmentScores& scores, const Corpus& corpus,
                                 const std::string& human_system,
                                 const std::set<std::string>& rivals,
                                 PreferenceMode mode = PreferenceMode::joint_strict);

// Per language pair, plus a final "mean" row averaging the pair percentages.
std::vector<PreferenceReport> preference_by_pair(const SegmentScores& scores,
                                                 const Corpus& corpus,
                                                 const std::string& human_system,
                                                 const std::set<std::string>& rivals,
                                                 PreferenceMode mode, std::string scheme,
                                                 Scenario scenario);

// Percentage of tuples whose best pick is a human segment. Tuples without a
// human member are skipped with a warning.
double bws_preference_rate(std::span<const BWSJudgment> judgments, const Corpus& corpus,
                           const std::string& human_system, Warnings* warnings = nullptr);

std::vector<PreferenceReport> bws_preference_by_pair(std::span<const BWSJudgment> judgments,
                                                     const Corpus& corpus,
                                                     const std::string& human_system,
                                                     std::string scheme = "bws");

// (best - worst) / appearances, in [-1, 1].
double bws_win_rate(std::span<const BWSJudgment> judgments, const Corpus& corpus,
                    const std::string& system_id);

// System-name resolution. A name matches a system whose id or display name,
// lowercased with non-alphanumerics removed, starts with the normalized name.
std::set<std::string> resolve_systems(const Corpus& corpus, const std::vector<std::string>& names);
std::string human_system_id(const Corpus& corpus);

inline const std::vector<std::string> kTopSystemNames = {"gpt-4o", "deepl", "google", "qwen"};
// "Other" excludes GPT-4o, DeepL and Google; Qwen stays a rival in both.
inline const std::vector<std::string> kOtherExcludedNames = {"gpt-4o", "deepl", "google"};

std::set<std::string> rivals_for(const Corpus& corpus, Scenario scenario);

struct AdequacyRow {
  std::string scheme;  // "mqm", "sqm", "bws", "free", "combined", or a metric id
  std::string source;  // "student", "professional", or "metric"
  Scenario scenario = Scenario::vs_top_systems;
  std::vector<PreferenceReport> per_pair;  // ends with the "mean" row
  double mean() const { return per_pair.empty() ? 0.0 : per_pair.back().percentage; }
};

struct AdequacyOptions {
  SeverityWeights weights;
  PreferenceMode mode = PreferenceMode::joint_strict;
  // Extra score sources, e.g. imported metrics: metric_id -> scores.
  std::map<std::string, SegmentScores> metrics;
};

// Every scheme x evaluator role present in the corpus, both scenarios
// (BWS only for the top-system scenario). Sources without data are omitted.
std::vector<AdequacyRow> adequacy_matrix(const Corpus& corpus, const AdequacyOptions& options = {});

}  // namespace liteval
