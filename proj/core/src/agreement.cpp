#include "liteval/agreement.hpp"

#include <algorithm>
#include <numeric>
#include <set>

#include "liteval/unicode.hpp"

namespace liteval {

namespace {

void check_pair(std::span<const double> x, std::span<const double> y, const char* who) {
  if (x.size() != y.size()) throw AgreementError(std::string(who) + ": length mismatch");
  if (x.size() < 2) throw AgreementError(std::string(who) + ": need at least two items");
}

// Number of tied pairs among consecutive equal runs of a sorted sequence.
template <class Eq>
std::uint64_t tied_pairs(std::size_t n, Eq&& equal_to_prev) {
  std::uint64_t total = 0;
  std::uint64_t run = 1;
  for (std::size_t i = 1; i < n; ++i) {
    if (equal_to_prev(i)) {
      ++run;
    } else {
      total += run * (run - 1) / 2;
      run = 1;
    }
  }
  total += run * (run - 1) / 2;
  return total;
}

// Sorts `v` ascending by key and returns the number of inversions.
std::uint64_t merge_count(std::vector<double>& v, std::vector<double>& buf, std::size_t lo,
                          std::size_t hi) {
  if (hi - lo < 2) return 0;
  const std::size_t mid = lo + (hi - lo) / 2;
  std::uint64_t swaps = merge_count(v, buf, lo, mid) + merge_count(v, buf, mid, hi);
  std::size_t i = lo, j = mid, k = lo;
  while (i < mid && j < hi) {
    if (v[j] < v[i]) {
      swaps += mid - i;
      buf[k++] = v[j++];
    } else {
      buf[k++] = v[i++];
    }
  }
  while (i < mid) buf[k++] = v[i++];
  while (j < hi) buf[k++] = v[j++];
  std::copy(buf.begin() + static_cast<std::ptrdiff_t>(lo), buf.begin() + static_cast<std::ptrdiff_t>(hi),
            v.begin() + static_cast<std::ptrdiff_t>(lo));
  return swaps;
}

struct LabeledSpan {
  std::size_t start;
  std::size_t end;
  std::string label;
  int severity;
};

std::vector<std::string> project(std::size_t text_length, const std::vector<LabeledSpan>& spans) {
  std::vector<std::string> labels(text_length, std::string(kNoneLabel));
  std::vector<int> winner_severity(text_length, -1);
  // Earlier spans win ties, so only a strictly more severe span overwrites.
  for (const auto& s : spans) {
    const auto end = std::min(s.end, text_length);
    for (std::size_t c = s.start; c < end; ++c) {
      if (s.severity > winner_severity[c]) {
        winner_severity[c] = s.severity;
        labels[c] = s.label;
      }
    }
  }
  return labels;
}

}  // namespace

double kendall_tau_b(std::span<const double> x, std::span<const double> y) {
  check_pair(x, y, "kendall_tau_b");
  const std::size_t n = x.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (x[a] != x[b]) return x[a] < x[b];
    return y[a] < y[b];
  });

  const std::uint64_t total = static_cast<std::uint64_t>(n) * (n - 1) / 2;
  const std::uint64_t x_ties =
      tied_pairs(n, [&](std::size_t i) { return x[order[i]] == x[order[i - 1]]; });
  const std::uint64_t joint_ties = tied_pairs(n, [&](std::size_t i) {
    return x[order[i]] == x[order[i - 1]] && y[order[i]] == y[order[i - 1]];
  });

  std::vector<double> ys(n);
  for (std::size_t i = 0; i < n; ++i) ys[i] = y[order[i]];
  std::vector<double> buf(n);
  const std::uint64_t swaps = merge_count(ys, buf, 0, n);
  const std::uint64_t y_ties = tied_pairs(n, [&](std::size_t i) { return ys[i] == ys[i - 1]; });

  if (x_ties == total || y_ties == total) {
    throw AgreementError("kendall_tau_b: undefined when one side is entirely tied");
  }
  // concordant - discordant
  const double numerator = static_cast<double>(total) - static_cast<double>(x_ties) -
                           static_cast<double>(y_ties) + static_cast<double>(joint_ties) -
                           2.0 * static_cast<double>(swaps);
  const double denominator = std::sqrt(static_cast<double>(total - x_ties) *
                                       static_cast<double>(total - y_ties));
  return std::clamp(numerator / denominator, -1.0, 1.0);
}

std::vector<double> average_ranks(std::span<const double> x) {
  const std::size_t n = x.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return x[a] < x[b]; });
  std::vector<double> ranks(n);
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && x[order[j + 1]] == x[order[i]]) ++j;
    const double rank = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = rank;
    i = j + 1;
  }
  return ranks;
}

double pearson_r(std::span<const double> x, std::span<const double> y) {
  check_pair(x, y, "pearson_r");
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - mx;
    const double dy = y[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0) throw AgreementError("pearson_r: undefined for constant input");
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

double spearman_rho(std::span<const double> x, std::span<const double> y) {
  check_pair(x, y, "spearman_rho");
  const auto rx = average_ranks(x);
  const auto ry = average_ranks(y);
  try {
    return pearson_r(rx, ry);
  } catch (const AgreementError&) {
    throw AgreementError("spearman_rho: undefined when one side is entirely tied");
  }
}

std::vector<std::string> span_unit_labels(std::size_t text_length,
                                          const MQMAnnotation& annotation, SpanMode mode) {
  std::vector<LabeledSpan> spans;
  spans.reserve(annotation.spans.size());
  for (const auto& s : annotation.spans) {
    spans.push_back({s.start, s.end,
                     mode == SpanMode::binary ? std::string(kErrorLabel)
                                              : std::string(to_string(s.category.major)),
                     severity_rank(s.severity)});
  }
  return project(text_length, spans);
}

std::vector<std::string> span_unit_labels(const TranslationSegment& segment,
                                          const MQMAnnotation& annotation, SpanMode mode) {
  return span_unit_labels(unicode::length(segment.text), annotation, mode);
}

std::vector<std::string> span_unit_labels(std::size_t text_length,
                                          const FreeAnnotation& annotation) {
  std::vector<LabeledSpan> spans;
  for (const auto& s : annotation.spans) {
    if (s.polarity == Polarity::error) spans.push_back({s.start, s.end, std::string(kErrorLabel), 0});
  }
  return project(text_length, spans);
}

double span_match_kappa(const MQMAnnotation& a, const MQMAnnotation& b,
                        const TranslationSegment& segment, SpanMode mode) {
  const auto n = unicode::length(segment.text);
  return cohen_kappa(span_unit_labels(n, a, mode), span_unit_labels(n, b, mode));
}

double bws_agreement(std::span<const BWSJudgment> a, std::span<const BWSJudgment> b) {
  auto index = [](std::span<const BWSJudgment> js) {
    std::map<std::string, const BWSJudgment*> out;
    for (const auto& j : js) out[j.tuple_id] = &j;
    return out;
  };
  const auto ia = index(a);
  const auto ib = index(b);
  std::set<std::string> ka, kb;
  for (const auto& [k, v] : ia) ka.insert(k);
  for (const auto& [k, v] : ib) kb.insert(k);
  if (ka != kb) throw AgreementError("bws_agreement: evaluators judged different tuples");

  auto label = [](const BWSJudgment& j, const std::string& seg) {
    if (seg == j.best_id) return BwsLabel::best;
    if (seg == j.worst_id) return BwsLabel::worst;
    return BwsLabel::neither;
  };
  std::vector<BwsLabel> la, lb;
  for (const auto& [tuple, ja] : ia) {
    const auto* jb = ib.at(tuple);
    std::set<std::string> members(ja->segment_ids.begin(), ja->segment_ids.end());
    if (members != std::set<std::string>(jb->segment_ids.begin(), jb->segment_ids.end())) {
      throw AgreementError("bws_agreement: tuple " + tuple + " has different members");
    }
    for (const auto& seg : members) {
      la.push_back(label(*ja, seg));
      lb.push_back(label(*jb, seg));
    }
  }
  return cohen_kappa(la, lb);
}

namespace {

template <class Records, class KeyFn>
std::map<std::string, std::map<std::string, const typename Records::value_type*>> by_evaluator(
    const Records& records, KeyFn key) {
  std::map<std::string, std::map<std::string, const typename Records::value_type*>> out;
  for (const auto& r : records) out[r.evaluator_id][key(r)] = &r;
  return out;
}

const std::map<std::string, const MQMAnnotation*>& mqm_of(
    const std::map<std::string, std::map<std::string, const MQMAnnotation*>>& idx,
    const std::string& evaluator) {
  static const std::map<std::string, const MQMAnnotation*> empty;
  auto it = idx.find(evaluator);
  return it == idx.end() ? empty : it->second;
}

std::vector<AgreementReport> scalar_agreement(const Corpus& corpus, const SegmentScores& a,
                                              const SegmentScores& b) {
  std::map<LanguagePair, std::pair<std::vector<double>, std::vector<double>>> grouped;
  for (const auto& [seg, va] : a) {
    auto it = b.find(seg);
    if (it == b.end()) continue;
    auto& [xs, ys] = grouped[corpus.pair_of(seg)];
    xs.push_back(va);
    ys.push_back(it->second);
  }
  std::vector<AgreementReport> out;
  for (const auto& [pair, xy] : grouped) {
    out.push_back({pair, "kendall_tau_b", kendall_tau_b(xy.first, xy.second), xy.first.size()});
  }
  return out;
}

}  // namespace

std::vector<AgreementReport> pairwise_agreement(const Corpus& corpus,
                                                const std::string& evaluator_a,
                                                const std::string& evaluator_b,
                                                AgreementScheme scheme, SpanMode mode,
                                                const SeverityWeights& weights) {
  for (const auto* e : {&evaluator_a, &evaluator_b}) {
    if (!corpus.evaluators.contains(*e)) throw AgreementError("unknown evaluator " + *e);
  }
  switch (scheme) {
    case AgreementScheme::mqm: {
      auto all = mqm_scores_by_evaluator(corpus, weights);
      return scalar_agreement(corpus, all[evaluator_a], all[evaluator_b]);
    }
    case AgreementScheme::sqm: {
      auto all = sqm_scores_by_evaluator(corpus);
      return scalar_agreement(corpus, all[evaluator_a], all[evaluator_b]);
    }
    case AgreementScheme::bws: {
      std::map<LanguagePair, std::pair<std::vector<BWSJudgment>, std::vector<BWSJudgment>>> grouped;
      std::map<std::string, const BWSJudgment*> tb;
      for (const auto& j : corpus.bws) {
        if (j.evaluator_id == evaluator_b) tb[j.tuple_id] = &j;
      }
      for (const auto& j : corpus.bws) {
        if (j.evaluator_id != evaluator_a) continue;
        auto it = tb.find(j.tuple_id);
        if (it == tb.end()) continue;
        auto& g = grouped[corpus.pair_of(j.segment_ids.front())];
        g.first.push_back(j);
        g.second.push_back(*it->second);
      }
      std::vector<AgreementReport> out;
      for (const auto& [pair, g] : grouped) {
        std::size_t items = 0;
        for (const auto& j : g.first) items += j.segment_ids.size();
        out.push_back({pair, "cohen_kappa", bws_agreement(g.first, g.second), items});
      }
      return out;
    }
    case AgreementScheme::span:
    case AgreementScheme::free_span: {
      const auto idx = by_evaluator(corpus.mqm, [](const auto& r) { return r.segment_id; });
      const auto& ma = mqm_of(idx, evaluator_a);
      std::map<LanguagePair, std::pair<std::vector<std::string>, std::vector<std::string>>> pooled;
      std::map<LanguagePair, std::size_t> segs;
      auto append = [](std::vector<std::string>& dst, std::vector<std::string>&& src) {
        dst.insert(dst.end(), std::make_move_iterator(src.begin()), std::make_move_iterator(src.end()));
      };
      if (scheme == AgreementScheme::span) {
        const auto& mb = mqm_of(idx, evaluator_b);
        for (const auto& [seg, a] : ma) {
          auto it = mb.find(seg);
          if (it == mb.end()) continue;
          const auto n = unicode::length(corpus.segment(seg).text);
          const auto pair = corpus.pair_of(seg);
          append(pooled[pair].first, span_unit_labels(n, *a, mode));
          append(pooled[pair].second, span_unit_labels(n, *it->second, mode));
          ++segs[pair];
        }
      } else {
        const auto fidx = by_evaluator(corpus.free, [](const auto& r) { return r.segment_id; });
        auto fit = fidx.find(evaluator_b);
        if (fit != fidx.end()) {
          for (const auto& [seg, a] : ma) {
            auto it = fit->second.find(seg);
            if (it == fit->second.end()) continue;
            const auto n = unicode::length(corpus.segment(seg).text);
            const auto pair = corpus.pair_of(seg);
            append(pooled[pair].first, span_unit_labels(n, *a, SpanMode::binary));
            append(pooled[pair].second, span_unit_labels(n, *it->second));
            ++segs[pair];
          }
        }
      }
      std::vector<AgreementReport> out;
      for (const auto& [pair, labels] : pooled) {
        out.push_back({pair, "cohen_kappa", cohen_kappa(labels.first, labels.second), segs[pair]});
      }
      return out;
    }
  }
  return {};
}

std::vector<std::pair<std::string, std::string>> agreement_pairs(const Corpus& corpus,
                                                                 AgreementScheme scheme,
                                                                 EvaluatorRole role) {
  std::map<std::string, std::set<std::string>> items;
  auto add = [&](const std::string& evaluator, const std::string& item) {
    auto it = corpus.evaluators.find(evaluator);
    if (it != corpus.evaluators.end() && it->second.role == role) items[evaluator].insert(item);
  };
  switch (scheme) {
    case AgreementScheme::mqm:
    case AgreementScheme::span:
    case AgreementScheme::free_span:
      for (const auto& a : corpus.mqm) add(a.evaluator_id, a.segment_id);
      break;
    case AgreementScheme::sqm:
      for (const auto& r : corpus.sqm) add(r.evaluator_id, r.segment_id);
      break;
    case AgreementScheme::bws:
      for (const auto& j : corpus.bws) add(j.evaluator_id, j.tuple_id);
      break;
  }
  std::vector<std::pair<std::string, std::string>> out;
  for (auto a = items.begin(); a != items.end(); ++a) {
    for (auto b = std::next(a); b != items.end(); ++b) {
      std::size_t shared = 0;
      for (const auto& i : a->second) shared += b->second.contains(i);
      if (shared >= 2) out.emplace_back(a->first, b->first);
    }
  }
  return out;
}

AgreementSummary agreement_summary(const Corpus& corpus, AgreementScheme scheme, EvaluatorRole role,
                                   SpanMode mode, const SeverityWeights& weights) {
  if (scheme == AgreementScheme::free_span) {
    throw std::invalid_argument("agreement_summary: free_span compares two roles");
  }
  struct Acc {
    double sum = 0.0;
    std::size_t n = 0;
    std::size_t items = 0;
    std::string statistic;
  };
  std::map<LanguagePair, Acc> acc;
  AgreementSummary out;
  for (const auto& [a, b] : agreement_pairs(corpus, scheme, role)) {
    std::vector<AgreementReport> reports;
    try {
      reports = pairwise_agreement(corpus, a, b, scheme, mode, weights);
    } catch (const AgreementError& e) {
      out.warnings.push_back(a + "/" + b + ": " + e.what());
      continue;
    }
    for (const auto& r : reports) {
      auto& x = acc[r.pair];
      x.sum += r.value;
      x.n += 1;
      x.items += r.n_items;
      x.statistic = r.statistic;
    }
  }
  for (const auto& [pair, x] : acc) {
    out.per_pair.push_back({pair, x.statistic, x.sum / static_cast<double>(x.n), x.items});
    out.mean += out.per_pair.back().value;
  }
  if (!out.per_pair.empty()) out.mean /= static_cast<double>(out.per_pair.size());
  return out;
}

}  // namespace liteval
