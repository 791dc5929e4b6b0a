#include "liteval/textstats.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <set>
#include <unordered_map>

#include "liteval/unicode.hpp"

namespace liteval {

namespace fs = std::filesystem;

// ---------------------------------------------------------------------------
// Trees

std::size_t ParseTree::node_count() const {
  std::size_t n = 1;
  for (const auto& c : children) n += c.node_count();
  return n;
}

namespace {

class BracketParser {
 public:
  explicit BracketParser(std::string_view text) : text_(text) {}

  ParseTree parse() {
    skip_space();
    if (!consume('(')) fail("expected '('");
    ParseTree t = parse_node_body();
    skip_space();
    if (pos_ != text_.size()) fail("trailing characters after tree");
    return t;
  }

 private:
  // Called just after '('.
  ParseTree parse_node_body() {
    skip_space();
    ParseTree node;
    if (peek() != '(' && peek() != ')') node.label = read_token();
    if (node.label.empty()) node.label = "ROOT";
    while (true) {
      skip_space();
      if (pos_ >= text_.size()) fail("unbalanced brackets");
      if (consume(')')) break;
      if (consume('(')) {
        node.children.push_back(parse_node_body());
      } else {
        read_token();  // terminal word; dropped
      }
    }
    return node;
  }

  std::string read_token() {
    const auto start = pos_;
    while (pos_ < text_.size() && !is_space(text_[pos_]) && text_[pos_] != '(' &&
           text_[pos_] != ')') {
      ++pos_;
    }
    if (start == pos_) fail("expected token");
    return std::string(text_.substr(start, pos_ - start));
  }

  static bool is_space(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r'; }
  void skip_space() {
    while (pos_ < text_.size() && is_space(text_[pos_])) ++pos_;
  }
  char peek() const { return pos_ < text_.size() ? text_[pos_] : '\0'; }
  bool consume(char c) {
    if (peek() != c) return false;
    ++pos_;
    return true;
  }
  [[noreturn]] void fail(const std::string& what) const {
    throw TreeParseError("bracketed tree, offset " + std::to_string(pos_) + ": " + what);
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

// Post-order flattening; children precede their parent.
struct FlatTree {
  std::vector<std::string> production;
  std::vector<std::vector<std::size_t>> children;

  explicit FlatTree(const ParseTree& t) { add(t); }

  std::size_t add(const ParseTree& t) {
    std::vector<std::size_t> kids;
    kids.reserve(t.children.size());
    for (const auto& c : t.children) kids.push_back(add(c));
    std::string prod = t.label;
    if (!t.children.empty()) {
      prod += " ->";
      for (const auto& c : t.children) {
        prod += ' ';
        prod += c.label;
      }
    }
    production.push_back(std::move(prod));
    children.push_back(std::move(kids));
    return production.size() - 1;
  }
  std::size_t size() const { return production.size(); }
};

}  // namespace

ParseTree parse_bracketed(std::string_view text) { return BracketParser(text).parse(); }

std::string to_bracketed(const ParseTree& tree) {
  std::string out = "(" + tree.label;
  for (const auto& c : tree.children) out += " " + to_bracketed(c);
  return out + ")";
}

ParseTreeDoc load_tree_doc(const fs::path& file, std::string segment_id) {
  std::ifstream in(file);
  if (!in) throw TreeParseError("cannot open " + file.string());
  ParseTreeDoc doc{std::move(segment_id), {}};
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      doc.trees.push_back(parse_bracketed(line));
    } catch (const TreeParseError& e) {
      throw TreeParseError(file.filename().string() + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
  if (doc.trees.empty()) throw TreeParseError(file.string() + ": no trees");
  return doc;
}

std::map<std::string, ParseTreeDoc> load_tree_dir(const fs::path& dir) {
  if (!fs::is_directory(dir)) throw TreeParseError("not a tree directory: " + dir.string());
  std::map<std::string, ParseTreeDoc> out;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (!entry.is_regular_file() || entry.path().extension() != ".txt") continue;
    auto id = entry.path().stem().string();
    out.emplace(id, load_tree_doc(entry.path(), id));
  }
  return out;
}

double tree_kernel(const ParseTree& a, const ParseTree& b, double lambda) {
  if (!(lambda > 0.0 && lambda <= 1.0)) throw std::invalid_argument("lambda must lie in (0, 1]");
  const FlatTree fa(a);
  const FlatTree fb(b);
  std::unordered_map<std::string_view, std::vector<std::size_t>> by_production;
  for (std::size_t j = 0; j < fb.size(); ++j) by_production[fb.production[j]].push_back(j);

  std::vector<double> delta(fa.size() * fb.size(), 0.0);
  auto at = [&](std::size_t i, std::size_t j) -> double& { return delta[i * fb.size() + j]; };
  double total = 0.0;
  for (std::size_t i = 0; i < fa.size(); ++i) {
    auto it = by_production.find(fa.production[i]);
    if (it == by_production.end()) continue;
    for (std::size_t j : it->second) {
      double d = lambda;
      const auto& ka = fa.children[i];
      const auto& kb = fb.children[j];
      for (std::size_t c = 0; c < ka.size(); ++c) d *= 1.0 + at(ka[c], kb[c]);
      at(i, j) = d;
      total += d;
    }
  }
  return total;
}

double normalized_kernel(const ParseTree& a, const ParseTree& b, double lambda) {
  const double kaa = tree_kernel(a, a, lambda);
  const double kbb = tree_kernel(b, b, lambda);
  if (kaa <= 0.0 || kbb <= 0.0) throw std::invalid_argument("normalized_kernel: zero self-kernel");
  return std::clamp(tree_kernel(a, b, lambda) / std::sqrt(kaa * kbb), 0.0, 1.0);
}

double doc_syntactic_similarity(const ParseTreeDoc& source, const ParseTreeDoc& target,
                                double lambda) {
  if (source.trees.empty() || target.trees.empty()) {
    throw std::invalid_argument("doc_syntactic_similarity: empty document");
  }
  const std::size_t n = source.trees.size();
  const std::size_t m = target.trees.size();
  std::vector<double> self_src(n), self_tgt(m);
  for (std::size_t i = 0; i < n; ++i) self_src[i] = tree_kernel(source.trees[i], source.trees[i], lambda);
  for (std::size_t j = 0; j < m; ++j) self_tgt[j] = tree_kernel(target.trees[j], target.trees[j], lambda);

  std::vector<double> best_src(n, 0.0), best_tgt(m, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      const double k = tree_kernel(source.trees[i], target.trees[j], lambda) /
                       std::sqrt(self_src[i] * self_tgt[j]);
      best_src[i] = std::max(best_src[i], k);
      best_tgt[j] = std::max(best_tgt[j], k);
    }
  }
  auto mean = [](const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
  };
  return std::clamp((mean(best_src) + mean(best_tgt)) / 2.0, 0.0, 1.0);
}

// ---------------------------------------------------------------------------
// BLEU

namespace {

// Python's str.split() whitespace set.
bool is_split_space(char32_t c) {
  return (c >= 0x09 && c <= 0x0D) || (c >= 0x1C && c <= 0x20) || c == 0x85 || c == 0xA0 ||
         c == 0x1680 || (c >= 0x2000 && c <= 0x200A) || c == 0x2028 || c == 0x2029 ||
         c == 0x202F || c == 0x205F || c == 0x3000;
}

bool is_ascii_digit(char32_t c) { return c >= U'0' && c <= U'9'; }

// [\{-\~\[-\` -\&\(-\+\:-\@\/]
bool is_13a_symbol(char32_t c) {
  return (c >= U'{' && c <= U'~') || (c >= U'[' && c <= U'`') || (c >= U' ' && c <= U'&') ||
         (c >= U'(' && c <= U'+') || (c >= U':' && c <= U'@') || c == U'/';
}

// Character ranges the reference zh tokenizer isolates. Two of its table
// entries are written as 5-hex-digit \u escapes, which Python reads as a
// 4-digit escape plus a trailing digit; the effective ranges below keep that
// behaviour so scores agree with the reference implementation.
bool is_zh_char(char32_t c) {
  static constexpr std::pair<char32_t, char32_t> kRanges[] = {
      {0x3400, 0x4DB5}, {0x4E00, 0x9FA5}, {0x9FA6, 0x9FBB}, {0xF900, 0xFA2D},
      {0xFA30, 0xFA6A}, {0xFA70, 0xFAD9}, {0x2001, 0x2A6D}, {0x2F81, 0x2FA1},
      {0xFF00, 0xFFEF}, {0x2E80, 0x2EFF}, {0x3000, 0x303F}, {0x31C0, 0x31EF},
      {0x2F00, 0x2FDF}, {0x2FF0, 0x2FFF}, {0x3100, 0x312F}, {0x31A0, 0x31BF},
      {0xFE10, 0xFE1F}, {0xFE30, 0xFE4F}, {0x2600, 0x26FF}, {0x2700, 0x27BF},
      {0x3200, 0x32FF}, {0x3300, 0x33FF},
  };
  for (const auto& [lo, hi] : kRanges) {
    if (c >= lo && c <= hi) return true;
  }
  return false;
}

void replace_all(std::string& s, std::string_view from, std::string_view to) {
  std::size_t pos = 0;
  while ((pos = s.find(from, pos)) != std::string::npos) {
    s.replace(pos, from.size(), to);
    pos += to.size();
  }
}

// Left-to-right, non-overlapping rewrite of two-character matches, the way
// a regex substitution of "(A)(B)" would proceed.
template <class First, class Second, class Emit>
std::u32string rewrite_pairs(const std::u32string& s, First first, Second second, Emit emit) {
  std::u32string out;
  out.reserve(s.size() * 2);
  std::size_t i = 0;
  while (i < s.size()) {
    if (i + 1 < s.size() && first(s[i]) && second(s[i + 1])) {
      emit(out, s[i], s[i + 1]);
      i += 2;
    } else {
      out.push_back(s[i]);
      ++i;
    }
  }
  return out;
}

std::vector<std::string> regexp_tokenize(const std::u32string& line) {
  std::u32string s;
  s.reserve(line.size() * 2);
  for (char32_t c : line) {
    if (is_13a_symbol(c)) {
      s.push_back(U' ');
      s.push_back(c);
      s.push_back(U' ');
    } else {
      s.push_back(c);
    }
  }
  auto is_period_comma = [](char32_t c) { return c == U'.' || c == U','; };
  auto not_digit = [](char32_t c) { return !is_ascii_digit(c); };
  s = rewrite_pairs(s, not_digit, is_period_comma, [](std::u32string& o, char32_t a, char32_t b) {
    o.push_back(a);
    o.push_back(U' ');
    o.push_back(b);
    o.push_back(U' ');
  });
  s = rewrite_pairs(s, is_period_comma, not_digit, [](std::u32string& o, char32_t a, char32_t b) {
    o.push_back(U' ');
    o.push_back(a);
    o.push_back(U' ');
    o.push_back(b);
  });
  s = rewrite_pairs(s, is_ascii_digit, [](char32_t c) { return c == U'-'; },
                    [](std::u32string& o, char32_t a, char32_t b) {
                      o.push_back(a);
                      o.push_back(U' ');
                      o.push_back(b);
                      o.push_back(U' ');
                    });
  std::vector<std::string> tokens;
  std::u32string cur;
  for (char32_t c : s) {
    if (is_split_space(c)) {
      if (!cur.empty()) tokens.push_back(unicode::encode(cur));
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  if (!cur.empty()) tokens.push_back(unicode::encode(cur));
  return tokens;
}

std::u32string rstrip(std::u32string s) {
  while (!s.empty() && is_split_space(s.back())) s.pop_back();
  return s;
}

std::u32string strip(std::u32string s) {
  s = rstrip(std::move(s));
  std::size_t b = 0;
  while (b < s.size() && is_split_space(s[b])) ++b;
  return s.substr(b);
}

}  // namespace

BleuTokenizer tokenizer_for(std::string_view language) {
  return language == "zh" || language == "ja" ? BleuTokenizer::char_cjk : BleuTokenizer::intl_13a;
}

std::vector<std::string> tokenize(std::string_view text, BleuTokenizer tokenizer) {
  auto line = rstrip(unicode::decode(text));
  if (tokenizer == BleuTokenizer::char_cjk) {
    line = strip(std::move(line));
    std::u32string spaced;
    spaced.reserve(line.size() * 3);
    for (char32_t c : line) {
      if (is_zh_char(c)) {
        spaced.push_back(U' ');
        spaced.push_back(c);
        spaced.push_back(U' ');
      } else {
        spaced.push_back(c);
      }
    }
    return regexp_tokenize(spaced);
  }
  std::string s = unicode::encode(line);
  replace_all(s, "<skipped>", "");
  replace_all(s, "-\n", "");
  replace_all(s, "\n", " ");
  if (s.find('&') != std::string::npos) {
    replace_all(s, "&quot;", "\"");
    replace_all(s, "&amp;", "&");
    replace_all(s, "&lt;", "<");
    replace_all(s, "&gt;", ">");
  }
  return regexp_tokenize(unicode::decode(" " + s + " "));
}

BleuResult bleu_stats(const std::vector<std::string>& hyp, const std::vector<std::string>& ref) {
  constexpr std::size_t kMaxOrder = 4;
  BleuResult r;
  r.hyp_len = hyp.size();
  r.ref_len = ref.size();

  auto join = [](const std::vector<std::string>& toks, std::size_t i, std::size_t n) {
    std::string key = toks[i];
    for (std::size_t k = 1; k < n; ++k) {
      key += '\x1f';
      key += toks[i + k];
    }
    return key;
  };
  for (std::size_t n = 1; n <= kMaxOrder; ++n) {
    std::unordered_map<std::string, std::size_t> ref_counts;
    if (ref.size() >= n) {
      for (std::size_t i = 0; i + n <= ref.size(); ++i) ++ref_counts[join(ref, i, n)];
    }
    std::unordered_map<std::string, std::size_t> hyp_counts;
    if (hyp.size() >= n) {
      for (std::size_t i = 0; i + n <= hyp.size(); ++i) ++hyp_counts[join(hyp, i, n)];
      r.total[n - 1] = hyp.size() - n + 1;
    }
    for (const auto& [gram, count] : hyp_counts) {
      auto it = ref_counts.find(gram);
      if (it != ref_counts.end()) r.correct[n - 1] += std::min(count, it->second);
    }
  }

  if (r.hyp_len < r.ref_len) {
    r.brevity_penalty = r.hyp_len > 0 ? std::exp(1.0 - static_cast<double>(r.ref_len) /
                                                           static_cast<double>(r.hyp_len))
                                      : 0.0;
  }
  if (std::all_of(r.correct.begin(), r.correct.end(), [](std::size_t c) { return c == 0; })) {
    r.score = 0.0;
    return r;
  }
  double smooth = 1.0;
  std::size_t effective_order = kMaxOrder;
  for (std::size_t n = 1; n <= kMaxOrder; ++n) {
    if (r.total[n - 1] == 0) break;
    effective_order = n;
    if (r.correct[n - 1] == 0) {
      smooth *= 2.0;
      r.precisions[n - 1] = 100.0 / (smooth * static_cast<double>(r.total[n - 1]));
    } else {
      r.precisions[n - 1] =
          100.0 * static_cast<double>(r.correct[n - 1]) / static_cast<double>(r.total[n - 1]);
    }
  }
  double log_sum = 0.0;
  for (std::size_t n = 0; n < effective_order; ++n) {
    log_sum += r.precisions[n] > 0.0 ? std::log(r.precisions[n]) : -9999999999.0;
  }
  r.score = r.brevity_penalty * std::exp(log_sum / static_cast<double>(effective_order));
  return r;
}

double bleu(std::string_view hypothesis, std::string_view reference, BleuTokenizer tokenizer) {
  if (hypothesis.empty() || reference.empty()) throw std::invalid_argument("bleu: empty input");
  return bleu_stats(tokenize(hypothesis, tokenizer), tokenize(reference, tokenizer)).score;
}

// ---------------------------------------------------------------------------
// Corpus-level diversity and literalness

namespace {

bool in_scope(const SourceParagraph& p, const std::optional<LanguagePair>& pair,
              const std::optional<Era>& era) {
  return (!pair || p.pair() == *pair) && (!era || p.era == *era);
}

double mean_of(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return v.empty() ? std::numeric_limits<double>::quiet_NaN() : s / static_cast<double>(v.size());
}

}  // namespace

LexicalOverlap pairwise_lexical_overlap(const Corpus& corpus, const OverlapOptions& options) {
  // paragraph -> system -> token lists of its versions
  std::map<std::string, std::map<std::string, std::vector<std::vector<std::string>>>> grouped;
  for (const auto& [id, seg] : corpus.segments) {
    const auto& p = corpus.paragraph(seg.source_id);
    if (!in_scope(p, options.pair, options.era)) continue;
    grouped[seg.source_id][seg.system_id].push_back(
        tokenize(seg.text, tokenizer_for(p.target_language)));
  }

  std::set<std::string> system_set;
  for (const auto& [pid, per_system] : grouped) {
    for (const auto& [sys, v] : per_system) system_set.insert(sys);
  }
  LexicalOverlap out;
  out.matrix.systems.assign(system_set.begin(), system_set.end());
  const std::size_t m = out.matrix.systems.size();
  std::map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < m; ++i) index[out.matrix.systems[i]] = i;

  std::vector<std::vector<std::vector<double>>> cell(m, std::vector<std::vector<double>>(m));
  std::vector<std::vector<double>> per_paragraph(m);
  for (const auto& [pid, per_system] : grouped) {
    if (per_system.size() < 2) continue;
    for (const auto& [sj, hyps] : per_system) {
      std::vector<double> row;
      for (const auto& [sk, refs] : per_system) {
        if (sj == sk) continue;
        std::vector<double> versions;
        for (const auto& h : hyps) {
          for (const auto& r : refs) versions.push_back(bleu_stats(h, r).score);
        }
        const double s = mean_of(versions);
        row.push_back(s);
        cell[index[sj]][index[sk]].push_back(s);
      }
      per_paragraph[index[sj]].push_back(mean_of(row));
    }
  }
  out.matrix.values.assign(m, std::vector<double>(m, std::numeric_limits<double>::quiet_NaN()));
  for (std::size_t j = 0; j < m; ++j) {
    if (per_paragraph[j].empty()) {
      throw std::invalid_argument("pairwise_lexical_overlap: system " + out.matrix.systems[j] +
                                  " shares no paragraph with another system");
    }
    out.mean[out.matrix.systems[j]] = mean_of(per_paragraph[j]);
    for (std::size_t k = 0; k < m; ++k) {
      out.matrix.values[j][k] = j == k ? 100.0 : mean_of(cell[j][k]);
    }
  }
  return out;
}

std::map<std::string, double> system_syntactic_similarity(
    const Corpus& corpus, const std::map<std::string, ParseTreeDoc>& trees, double lambda,
    std::optional<Era> era) {
  std::map<std::string, std::vector<double>> acc;
  for (const auto& [id, seg] : corpus.segments) {
    const auto& p = corpus.paragraph(seg.source_id);
    if (era && p.era != *era) continue;
    auto src = trees.find(seg.source_id);
    auto tgt = trees.find(id);
    if (src == trees.end() || tgt == trees.end()) continue;
    acc[seg.system_id].push_back(doc_syntactic_similarity(src->second, tgt->second, lambda));
  }
  std::map<std::string, double> out;
  for (const auto& [sys, v] : acc) out[sys] = mean_of(v);
  return out;
}

std::vector<LiteralnessRow> literalness_report(const Corpus& corpus,
                                               const std::map<std::string, ParseTreeDoc>& trees,
                                               const SegmentScores& human_scores,
                                               const SegmentScores& judge_scores,
                                               const LiteralnessOptions& options) {
  auto system_means = [&](const SegmentScores& scores) {
    std::map<std::string, std::vector<double>> acc;
    for (const auto& [seg, v] : scores) {
      const auto& s = corpus.segment(seg);
      if (options.era && corpus.paragraph(s.source_id).era != *options.era) continue;
      acc[s.system_id].push_back(v);
    }
    std::map<std::string, double> out;
    for (const auto& [sys, vals] : acc) out[sys] = mean_of(vals);
    return out;
  };
  const auto human = system_means(human_scores);
  const auto judge = system_means(judge_scores);
  const auto syntax = system_syntactic_similarity(corpus, trees, options.lambda, options.era);
  OverlapOptions oo;
  oo.era = options.era;
  const auto overlap = pairwise_lexical_overlap(corpus, oo);

  std::vector<LiteralnessRow> rows;
  for (const auto& [sys, mqm] : human) {
    auto s = syntax.find(sys);
    if (s == syntax.end()) throw std::invalid_argument("literalness_report: no parse trees for system " + sys);
    auto o = overlap.mean.find(sys);
    if (o == overlap.mean.end()) throw std::invalid_argument("literalness_report: no overlap for system " + sys);
    LiteralnessRow row;
    row.system_id = sys;
    row.human_mqm = mqm;
    row.syntactic_similarity = s->second;
    row.lexical_overlap = o->second;
    if (auto j = judge.find(sys); j != judge.end()) row.judge_score = j->second;
    rows.push_back(std::move(row));
  }
  auto assign_ranks = [&](auto value_of, auto set_rank) {
    std::vector<LiteralnessRow*> order;
    for (auto& r : rows) {
      if (value_of(r)) order.push_back(&r);
    }
    std::sort(order.begin(), order.end(), [&](const LiteralnessRow* a, const LiteralnessRow* b) {
      if (*value_of(*a) != *value_of(*b)) return *value_of(*a) > *value_of(*b);
      return a->system_id < b->system_id;
    });
    for (std::size_t i = 0; i < order.size(); ++i) set_rank(*order[i], static_cast<int>(i + 1));
  };
  assign_ranks([](const LiteralnessRow& r) { return std::optional<double>(r.human_mqm); },
               [](LiteralnessRow& r, int k) { r.rank_human = k; });
  assign_ranks([](const LiteralnessRow& r) { return r.judge_score; },
               [](LiteralnessRow& r, int k) { r.rank_judge = k; });
  return rows;
}

}  // namespace liteval
