#include "liteval/adequacy.hpp"

#include <algorithm>
#include <cctype>
#include <limits>

namespace liteval {

namespace {

std::string normalize(std::string_view s) {
  std::string out;
  for (unsigned char c : s) {
    if (std::isalnum(c)) out.push_back(static_cast<char>(std::tolower(c)));
  }
  return out;
}

double percent(std::size_t num, std::size_t den) {
  return den == 0 ? 0.0 : 100.0 * static_cast<double>(num) / static_cast<double>(den);
}

}  // namespace

std::string_view to_string(Scenario s) {
  return s == Scenario::vs_top_systems ? "vs_top_systems" : "vs_other_systems";
}

std::string_view to_string(PreferenceMode m) {
  return m == PreferenceMode::joint_strict ? "joint_strict" : "pairwise";
}

PreferenceReport preference_rate(const SegmentScores& scores, const Corpus& corpus,
                                 const std::string& human_system,
                                 const std::set<std::string>& rivals, PreferenceMode mode) {
  if (rivals.empty()) throw AdequacyError("preference_rate: empty rival set");
  if (rivals.contains(human_system)) throw AdequacyError("preference_rate: human system is a rival");

  struct Sides {
    std::optional<double> human;  // best human version
    std::map<std::string, double> rival;  // best version per rival system
  };
  std::map<std::string, Sides> by_paragraph;
  for (const auto& [segment_id, score] : scores) {
    const auto& seg = corpus.segment(segment_id);
    if (seg.system_id == human_system) {
      auto& h = by_paragraph[seg.source_id].human;
      h = h ? std::max(*h, score) : score;
    } else if (rivals.contains(seg.system_id)) {
      auto& r = by_paragraph[seg.source_id].rival;
      auto [it, inserted] = r.emplace(seg.system_id, score);
      if (!inserted) it->second = std::max(it->second, score);
    }
  }

  PreferenceReport out;
  for (const auto& [paragraph, sides] : by_paragraph) {
    if (sides.rival.empty()) continue;
    if (!sides.human) {
      throw AdequacyError("preference_rate: paragraph " + paragraph +
                          " has rival scores but no human score");
    }
    ++out.n_paragraphs;
    if (mode == PreferenceMode::joint_strict) {
      ++out.comparisons;
      const bool wins = std::all_of(sides.rival.begin(), sides.rival.end(),
                                    [&](const auto& r) { return *sides.human > r.second; });
      out.preferred += wins;
    } else {
      for (const auto& [sys, s] : sides.rival) {
        ++out.comparisons;
        out.preferred += *sides.human > s;
      }
    }
  }
  out.percentage = percent(out.preferred, out.comparisons);
  return out;
}

std::vector<PreferenceReport> preference_by_pair(const SegmentScores& scores,
                                                 const Corpus& corpus,
                                                 const std::string& human_system,
                                                 const std::set<std::string>& rivals,
                                                 PreferenceMode mode, std::string scheme,
                                                 Scenario scenario) {
  std::map<std::string, SegmentScores> split;
  for (const auto& [id, v] : scores) split[corpus.pair_of(id).key()].emplace(id, v);
  std::vector<PreferenceReport> out;
  double sum = 0.0;
  std::size_t n = 0;
  for (const auto& [pair, part] : split) {
    auto r = preference_rate(part, corpus, human_system, rivals, mode);
    if (r.comparisons == 0) continue;
    r.pair = pair;
    r.scheme = scheme;
    r.scenario = scenario;
    sum += r.percentage;
    n += 1;
    out.push_back(std::move(r));
  }
  PreferenceReport mean;
  mean.pair = "mean";
  mean.scheme = std::move(scheme);
  mean.scenario = scenario;
  mean.percentage = n ? sum / static_cast<double>(n) : 0.0;
  for (const auto& r : out) {
    mean.n_paragraphs += r.n_paragraphs;
    mean.preferred += r.preferred;
    mean.comparisons += r.comparisons;
  }
  if (n) out.push_back(std::move(mean));
  return out;
}

namespace {

struct BwsCount {
  std::size_t tuples = 0;
  std::size_t human_best = 0;
};

BwsCount count_human_best(std::span<const BWSJudgment> judgments, const Corpus& corpus,
                          const std::string& human_system, Warnings* warnings) {
  BwsCount c;
  for (const auto& j : judgments) {
    const bool has_human = std::any_of(j.segment_ids.begin(), j.segment_ids.end(), [&](const auto& s) {
      return corpus.segment(s).system_id == human_system;
    });
    if (!has_human) {
      if (warnings) warnings->push_back("tuple " + j.tuple_id + " has no human segment; skipped");
      continue;
    }
    ++c.tuples;
    c.human_best += corpus.segment(j.best_id).system_id == human_system;
  }
  return c;
}

}  // namespace

double bws_preference_rate(std::span<const BWSJudgment> judgments, const Corpus& corpus,
                           const std::string& human_system, Warnings* warnings) {
  const auto c = count_human_best(judgments, corpus, human_system, warnings);
  return percent(c.human_best, c.tuples);
}

std::vector<PreferenceReport> bws_preference_by_pair(std::span<const BWSJudgment> judgments,
                                                     const Corpus& corpus,
                                                     const std::string& human_system,
                                                     std::string scheme) {
  std::map<std::string, std::vector<BWSJudgment>> split;
  for (const auto& j : judgments) {
    if (j.segment_ids.empty()) continue;
    split[corpus.pair_of(j.segment_ids.front()).key()].push_back(j);
  }
  std::vector<PreferenceReport> out;
  double sum = 0.0;
  for (const auto& [pair, js] : split) {
    const auto c = count_human_best(js, corpus, human_system, nullptr);
    if (c.tuples == 0) continue;
    PreferenceReport r;
    r.pair = pair;
    r.scheme = scheme;
    r.percentage = percent(c.human_best, c.tuples);
    r.n_paragraphs = c.tuples;
    r.preferred = c.human_best;
    r.comparisons = c.tuples;
    sum += r.percentage;
    out.push_back(std::move(r));
  }
  if (!out.empty()) {
    PreferenceReport mean;
    mean.pair = "mean";
    mean.scheme = std::move(scheme);
    mean.percentage = sum / static_cast<double>(out.size());
    for (const auto& r : out) {
      mean.n_paragraphs += r.n_paragraphs;
      mean.preferred += r.preferred;
      mean.comparisons += r.comparisons;
    }
    out.push_back(std::move(mean));
  }
  return out;
}

double bws_win_rate(std::span<const BWSJudgment> judgments, const Corpus& corpus,
                    const std::string& system_id) {
  long best = 0, worst = 0, appearances = 0;
  for (const auto& j : judgments) {
    for (const auto& s : j.segment_ids) {
      if (corpus.segment(s).system_id != system_id) continue;
      ++appearances;
      best += s == j.best_id;
      worst += s == j.worst_id;
    }
  }
  if (appearances == 0) throw AdequacyError("bws_win_rate: system " + system_id + " never appears");
  return static_cast<double>(best - worst) / static_cast<double>(appearances);
}

std::set<std::string> resolve_systems(const Corpus& corpus, const std::vector<std::string>& names) {
  std::set<std::string> out;
  for (const auto& name : names) {
    const auto want = normalize(name);
    if (want.empty()) continue;
    for (const auto& [id, sys] : corpus.systems) {
      if (normalize(id).starts_with(want) || normalize(sys.display_name).starts_with(want)) {
        out.insert(id);
      }
    }
  }
  return out;
}

std::string human_system_id(const Corpus& corpus) {
  std::vector<std::string> humans;
  for (const auto& [id, sys] : corpus.systems) {
    if (sys.kind == SystemKind::human) humans.push_back(id);
  }
  if (humans.size() != 1) {
    throw AdequacyError("expected exactly one human system, found " + std::to_string(humans.size()));
  }
  return humans.front();
}

std::set<std::string> rivals_for(const Corpus& corpus, Scenario scenario) {
  if (scenario == Scenario::vs_top_systems) return resolve_systems(corpus, kTopSystemNames);
  const auto excluded = resolve_systems(corpus, kOtherExcludedNames);
  std::set<std::string> out;
  for (const auto& [id, sys] : corpus.systems) {
    if (sys.kind != SystemKind::human && !excluded.contains(id)) out.insert(id);
  }
  return out;
}

std::vector<AdequacyRow> adequacy_matrix(const Corpus& corpus, const AdequacyOptions& options) {
  const auto human = human_system_id(corpus);
  std::vector<AdequacyRow> rows;
  auto add_scores = [&](const std::string& scheme, const std::string& source,
                        const SegmentScores& scores) {
    if (scores.empty()) return;
    for (auto scenario : {Scenario::vs_top_systems, Scenario::vs_other_systems}) {
      const auto rivals = rivals_for(corpus, scenario);
      if (rivals.empty()) continue;
      auto per_pair = preference_by_pair(scores, corpus, human, rivals, options.mode, scheme, scenario);
      if (per_pair.empty()) continue;
      rows.push_back({scheme, source, scenario, std::move(per_pair)});
    }
  };
  for (auto role : {EvaluatorRole::student, EvaluatorRole::professional}) {
    const std::string source(to_string(role));
    JudgmentFilter filter;
    filter.role = role;
    add_scores("mqm", source, segment_mqm_scores(corpus, options.weights, filter));
    add_scores("sqm", source, segment_sqm_scores(corpus, filter));
    add_scores("free", source, segment_free_scores(corpus, filter));
    std::vector<BWSJudgment> bws;
    for (const auto& j : corpus.bws) {
      auto it = corpus.evaluators.find(j.evaluator_id);
      if (it != corpus.evaluators.end() && it->second.role == role) bws.push_back(j);
    }
    if (!bws.empty()) {
      auto per_pair = bws_preference_by_pair(bws, corpus, human);
      if (!per_pair.empty()) rows.push_back({"bws", source, Scenario::vs_top_systems, std::move(per_pair)});
    }
  }
  for (const auto& [metric, scores] : options.metrics) add_scores(metric, "metric", scores);
  return rows;
}

}  // namespace liteval
