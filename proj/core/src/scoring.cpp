#include "liteval/scoring.hpp"

#include <algorithm>
#include <charconv>
#include <stdexcept>

namespace liteval {

namespace {

// Accumulates a running mean per key.
class MeanAccumulator {
 public:
  void add(const std::string& key, double v) {
    auto& [sum, n] = acc_[key];
    sum += v;
    ++n;
  }
  SegmentScores means() const {
    SegmentScores out;
    for (const auto& [k, sn] : acc_) out.emplace(k, sn.first / static_cast<double>(sn.second));
    return out;
  }

 private:
  std::map<std::string, std::pair<double, std::size_t>> acc_;
};

}  // namespace

void SeverityWeights::validate() const {
  if (!(non_translation > 0 && major > 0 && minor > 0)) {
    throw std::invalid_argument("severity weights must be positive");
  }
  if (!(non_translation >= major && major >= minor)) {
    throw std::invalid_argument("severity weights must satisfy non_translation >= major >= minor");
  }
}

SeverityWeights SeverityWeights::parse(std::string_view csv) {
  double v[3];
  std::size_t n = 0;
  std::size_t pos = 0;
  while (n < 3) {
    const auto comma = csv.find(',', pos);
    const auto field = csv.substr(pos, comma == std::string_view::npos ? csv.npos : comma - pos);
    const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v[n]);
    if (ec != std::errc() || ptr != field.data() + field.size()) {
      throw std::invalid_argument("weights must be three numbers 'nt,major,minor': " +
                                  std::string(csv));
    }
    ++n;
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  if (n != 3 || csv.find(',', pos) != std::string_view::npos) {
    throw std::invalid_argument("weights must be three numbers 'nt,major,minor': " +
                                std::string(csv));
  }
  SeverityWeights w{v[0], v[1], v[2]};
  w.validate();
  return w;
}

double mqm_score(const SeverityCounts& counts, int sentence_count,
                 const SeverityWeights& weights) {
  if (sentence_count < 1) throw std::invalid_argument("sentence_count must be >= 1");
  const double penalty = static_cast<double>(counts.non_translation) * weights.non_translation +
                         static_cast<double>(counts.major) * weights.major +
                         static_cast<double>(counts.minor) * weights.minor;
  return -penalty / static_cast<double>(sentence_count);
}

double mqm_score(const MQMAnnotation& annotation, int sentence_count,
                 const SeverityWeights& weights) {
  return mqm_score(count_severities(annotation), sentence_count, weights);
}

std::vector<double> minmax_scale(std::span<const double> scores, double lo, double hi,
                                 Warnings* warnings) {
  if (scores.empty()) return {};
  const auto [mn, mx] = std::minmax_element(scores.begin(), scores.end());
  const double min = *mn;
  const double max = *mx;
  if (min == max) {
    if (warnings) warnings->push_back("minmax_scale: all inputs equal, mapped to midpoint");
    return std::vector<double>(scores.size(), (lo + hi) / 2.0);
  }
  std::vector<double> out;
  out.reserve(scores.size());
  const double factor = (hi - lo) / (max - min);
  for (double s : scores) out.push_back(lo + (s - min) * factor);
  return out;
}

double combined_score(double mqm_scaled, double sqm, double alpha) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw std::invalid_argument("alpha must lie in [0, 1]");
  return (1.0 - alpha) * mqm_scaled + alpha * sqm;
}

int free_annotation_score(const FreeAnnotation& annotation) {
  int score = 0;
  for (const auto& span : annotation.spans) score += span.polarity == Polarity::good ? 1 : -1;
  return score;
}

bool JudgmentFilter::accepts(const Corpus& corpus, const std::string& evaluator_id,
                             const std::string& segment_id) const {
  if (!evaluator_ids.empty() && !evaluator_ids.contains(evaluator_id)) return false;
  if (role) {
    auto it = corpus.evaluators.find(evaluator_id);
    if (it == corpus.evaluators.end() || it->second.role != *role) return false;
  }
  if (pair && corpus.pair_of(segment_id) != *pair) return false;
  return true;
}

SegmentScores segment_mqm_scores(const Corpus& corpus, const SeverityWeights& weights,
                                 const JudgmentFilter& filter) {
  MeanAccumulator acc;
  for (const auto& a : corpus.mqm) {
    if (!filter.accepts(corpus, a.evaluator_id, a.segment_id)) continue;
    acc.add(a.segment_id, mqm_score(a, corpus.segment(a.segment_id).sentence_count, weights));
  }
  return acc.means();
}

SegmentScores segment_sqm_scores(const Corpus& corpus, const JudgmentFilter& filter) {
  MeanAccumulator acc;
  for (const auto& r : corpus.sqm) {
    if (!filter.accepts(corpus, r.evaluator_id, r.segment_id)) continue;
    acc.add(r.segment_id, static_cast<double>(r.score));
  }
  return acc.means();
}

SegmentScores segment_free_scores(const Corpus& corpus, const JudgmentFilter& filter) {
  MeanAccumulator acc;
  for (const auto& a : corpus.free) {
    if (!filter.accepts(corpus, a.evaluator_id, a.segment_id)) continue;
    acc.add(a.segment_id, static_cast<double>(free_annotation_score(a)));
  }
  return acc.means();
}

SegmentScores segment_combined_scores(const Corpus& corpus, double alpha,
                                      const SeverityWeights& weights,
                                      const JudgmentFilter& filter, Warnings* warnings) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw std::invalid_argument("alpha must lie in [0, 1]");
  const auto mqm = segment_mqm_scores(corpus, weights, filter);
  const auto sqm = segment_sqm_scores(corpus, filter);
  std::vector<std::string> ids;
  std::vector<double> raw;
  for (const auto& [id, v] : mqm) {
    if (sqm.contains(id)) {
      ids.push_back(id);
      raw.push_back(v);
    }
  }
  const auto scaled = minmax_scale(raw, SQMRating::kMin, SQMRating::kMax, warnings);
  SegmentScores out;
  for (std::size_t i = 0; i < ids.size(); ++i) {
    out.emplace(ids[i], combined_score(scaled[i], sqm.at(ids[i]), alpha));
  }
  return out;
}

std::map<std::string, SegmentScores> mqm_scores_by_evaluator(const Corpus& corpus,
                                                             const SeverityWeights& weights) {
  std::map<std::string, SegmentScores> out;
  for (const auto& a : corpus.mqm) {
    out[a.evaluator_id][a.segment_id] =
        mqm_score(a, corpus.segment(a.segment_id).sentence_count, weights);
  }
  return out;
}

std::map<std::string, SegmentScores> sqm_scores_by_evaluator(const Corpus& corpus) {
  std::map<std::string, SegmentScores> out;
  for (const auto& r : corpus.sqm) out[r.evaluator_id][r.segment_id] = r.score;
  return out;
}

SystemRanking system_ranking(const SegmentScores& scores, const Corpus& corpus,
                             std::string scheme, const std::vector<std::string>& requested,
                             Warnings* warnings) {
  std::map<std::string, std::pair<double, std::size_t>> acc;
  for (const auto& [segment_id, score] : scores) {
    auto& [sum, n] = acc[corpus.segment(segment_id).system_id];
    sum += score;
    ++n;
  }
  SystemRanking out{std::move(scheme), {}};
  for (const auto& id : requested) {
    if (!acc.contains(id) && warnings) {
      warnings->push_back("system " + id + " has no scores; omitted from ranking");
    }
  }
  for (const auto& [id, sn] : acc) {
    if (!requested.empty() && std::find(requested.begin(), requested.end(), id) == requested.end()) {
      continue;
    }
    out.entries.push_back({id, sn.first / static_cast<double>(sn.second), 0, sn.second});
  }
  std::sort(out.entries.begin(), out.entries.end(), [](const auto& a, const auto& b) {
    if (a.mean_score != b.mean_score) return a.mean_score > b.mean_score;
    return a.system_id < b.system_id;
  });
  for (std::size_t i = 0; i < out.entries.size(); ++i) out.entries[i].rank = static_cast<int>(i + 1);
  return out;
}

}  // namespace liteval
