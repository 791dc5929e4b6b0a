#include "liteval/corpus_io.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <iostream>
#include <sstream>

#include "liteval/json_codec.hpp"
#include "liteval/unicode.hpp"

namespace liteval {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

[[noreturn]] void reference_error(const std::string& what) {
  throw CorpusError(CorpusError::Kind::reference, what);
}

// Calls `on_record(json, line_no)` for every non-blank line.
template <class F>
void read_jsonl(const fs::path& file, F&& on_record) {
  std::ifstream in(file);
  if (!in) throw CorpusError(CorpusError::Kind::io, "cannot open " + file.string());
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    try {
      on_record(json::parse(line), line_no);
    } catch (const CorpusError&) {
      throw;
    } catch (const std::exception& e) {
      throw CorpusError(CorpusError::Kind::parse, file.filename().string() + ":" +
                                                      std::to_string(line_no) + ": " + e.what());
    }
  }
}

template <class T>
void load_map(const fs::path& file, std::map<std::string, T>& out) {
  read_jsonl(file, [&](const json& j, std::size_t line_no) {
    auto v = j.get<T>();
    const auto id = v.id;
    if (!out.emplace(id, std::move(v)).second) {
      throw CorpusError(CorpusError::Kind::duplicate, file.filename().string() + ":" +
                                                          std::to_string(line_no) +
                                                          ": duplicate id " + id);
    }
  });
}

template <class T>
void load_list(const fs::path& file, std::vector<T>& out) {
  if (!fs::exists(file)) return;
  read_jsonl(file, [&](const json& j, std::size_t) { out.push_back(j.get<T>()); });
}

template <class Range>
void write_jsonl(const fs::path& file, const Range& records) {
  std::ofstream out(file, std::ios::trunc);
  if (!out) throw CorpusError(CorpusError::Kind::io, "cannot write " + file.string());
  for (const auto& r : records) {
    if constexpr (requires { r.second; }) {
      out << json(r.second).dump() << '\n';
    } else {
      out << json(r).dump() << '\n';
    }
  }
  if (!out) throw CorpusError(CorpusError::Kind::io, "write failed: " + file.string());
}

bool is_terminal(char32_t c) {
  switch (c) {
    case U'.':
    case U'!':
    case U'?':
    case U'…':  // …
    case U'。':  // 。
    case U'！':  // ！
    case U'？':  // ？
      return true;
    default:
      return false;
  }
}

bool is_cjk_terminal(char32_t c) { return c == U'。' || c == U'！' || c == U'？'; }

bool is_closer(char32_t c) {
  switch (c) {
    case U'"':
    case U'\'':
    case U')':
    case U']':
    case U'”':  // ”
    case U'’':  // ’
    case U'»':  // »
    case U'«':  // « (German closing guillemet)
    case U'」':  // 」
    case U'』':  // 』
    case U'）':  // ）
    case U'“':  // “ (German closing quote)
      return true;
    default:
      return false;
  }
}

bool is_opener(char32_t c) {
  return c == U'"' || c == U'\'' || c == U'(' || c == U'[' || c == U'„' ||
         c == U'“' || c == U'‘' || c == U'«' || c == U'»';
}

}  // namespace

const TranslationSegment& Corpus::segment(const std::string& id) const {
  auto it = segments.find(id);
  if (it == segments.end()) reference_error("unknown segment id " + id);
  return it->second;
}

const SourceParagraph& Corpus::paragraph(const std::string& id) const {
  auto it = paragraphs.find(id);
  if (it == paragraphs.end()) reference_error("unknown paragraph id " + id);
  return it->second;
}

const SourceParagraph& Corpus::paragraph_of(const std::string& segment_id) const {
  return paragraph(segment(segment_id).source_id);
}

const System& Corpus::system_of(const std::string& segment_id) const {
  const auto& sys = segment(segment_id).system_id;
  auto it = systems.find(sys);
  if (it == systems.end()) reference_error("unknown system id " + sys);
  return it->second;
}

LanguagePair Corpus::pair_of(const std::string& segment_id) const {
  return paragraph_of(segment_id).pair();
}

std::map<std::string, std::vector<std::string>> Corpus::segments_by_paragraph() const {
  std::map<std::string, std::vector<std::string>> out;
  for (const auto& [id, seg] : segments) out[seg.source_id].push_back(id);
  return out;
}

std::set<LanguagePair> Corpus::language_pairs() const {
  std::set<LanguagePair> out;
  for (const auto& [id, p] : paragraphs) out.insert(p.pair());
  return out;
}

void Corpus::validate() const {
  for (const auto& [id, p] : paragraphs) {
    if (p.text.empty()) reference_error("paragraph " + id + ": empty text");
    if (p.sentence_count < 1) reference_error("paragraph " + id + ": sentence_count < 1");
    if (p.language == p.target_language) {
      reference_error("paragraph " + id + ": source and target language are equal");
    }
  }
  std::set<std::tuple<std::string, std::string, int>> versions;
  for (const auto& [id, s] : segments) {
    if (!paragraphs.contains(s.source_id)) {
      reference_error("segment " + id + ": unknown source_id " + s.source_id);
    }
    if (!systems.contains(s.system_id)) {
      reference_error("segment " + id + ": unknown system_id " + s.system_id);
    }
    if (s.text.empty()) reference_error("segment " + id + ": empty text");
    if (s.sentence_count < 1) reference_error("segment " + id + ": sentence_count < 1");
    if (!versions.emplace(s.source_id, s.system_id, s.version.value_or(-1)).second) {
      throw CorpusError(CorpusError::Kind::duplicate,
                        "segment " + id + ": duplicate (source_id, system_id, version)");
    }
  }
  auto check_evaluator = [&](const std::string& what, const std::string& eid) {
    if (!evaluators.contains(eid)) reference_error(what + ": unknown evaluator " + eid);
  };
  auto fail_on = [&](const std::string& what, const std::vector<Violation>& v) {
    if (!v.empty()) {
      throw CorpusError(CorpusError::Kind::reference, what + ": " + v.front().to_string());
    }
  };
  for (std::size_t i = 0; i < mqm.size(); ++i) {
    const auto what = "mqm record " + std::to_string(i + 1);
    check_evaluator(what, mqm[i].evaluator_id);
    fail_on(what, validate_annotation(mqm[i], segment(mqm[i].segment_id)));
  }
  for (std::size_t i = 0; i < sqm.size(); ++i) {
    const auto what = "sqm record " + std::to_string(i + 1);
    check_evaluator(what, sqm[i].evaluator_id);
    segment(sqm[i].segment_id);
    fail_on(what, validate_rating(sqm[i]));
  }
  for (std::size_t i = 0; i < bws.size(); ++i) {
    const auto what = "bws record " + std::to_string(i + 1);
    check_evaluator(what, bws[i].evaluator_id);
    fail_on(what, validate_judgment(bws[i], [&](const std::string& sid)
                                                -> std::optional<std::string> {
              auto it = segments.find(sid);
              if (it == segments.end()) return std::nullopt;
              return it->second.source_id;
            }));
  }
  for (std::size_t i = 0; i < free.size(); ++i) {
    const auto what = "free record " + std::to_string(i + 1);
    check_evaluator(what, free[i].evaluator_id);
    fail_on(what, validate_annotation(free[i], segment(free[i].segment_id)));
  }
}

Corpus load_corpus(const fs::path& dir) {
  if (!fs::is_directory(dir)) {
    throw CorpusError(CorpusError::Kind::io, "not a corpus directory: " + dir.string());
  }
  std::vector<std::string> missing;
  for (auto name : kRequiredCorpusFiles) {
    if (!fs::exists(dir / name)) missing.emplace_back(name);
  }
  if (!missing.empty()) {
    std::string msg = "missing corpus files in " + dir.string() + ":";
    for (const auto& m : missing) msg += " " + m;
    reference_error(msg);
  }

  Corpus c;
  load_map(dir / "paragraphs.jsonl", c.paragraphs);
  load_map(dir / "segments.jsonl", c.segments);
  load_map(dir / "systems.jsonl", c.systems);
  load_map(dir / "evaluators.jsonl", c.evaluators);
  load_list(dir / "mqm.jsonl", c.mqm);
  load_list(dir / "sqm.jsonl", c.sqm);
  load_list(dir / "bws.jsonl", c.bws);
  load_list(dir / "free.jsonl", c.free);

  for (auto& [id, p] : c.paragraphs) {
    if (p.sentence_count == 0 && !p.text.empty()) {
      p.sentence_count = count_sentences(p.text, p.language);
    }
  }
  for (auto& [id, s] : c.segments) {
    if (s.sentence_count == 0 && !s.text.empty()) {
      auto it = c.paragraphs.find(s.source_id);
      const std::string lang = it == c.paragraphs.end() ? "" : it->second.target_language;
      s.sentence_count = count_sentences(s.text, lang);
    }
  }
  c.validate();
  return c;
}

void save_judgments(const std::vector<MQMAnnotation>& mqm, const std::vector<SQMRating>& sqm,
                    const std::vector<BWSJudgment>& bws, const std::vector<FreeAnnotation>& free,
                    const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw CorpusError(CorpusError::Kind::io, "cannot create " + dir.string());
  write_jsonl(dir / "mqm.jsonl", mqm);
  write_jsonl(dir / "sqm.jsonl", sqm);
  write_jsonl(dir / "bws.jsonl", bws);
  write_jsonl(dir / "free.jsonl", free);
}

void save_corpus(const Corpus& corpus, const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw CorpusError(CorpusError::Kind::io, "cannot create " + dir.string());
  write_jsonl(dir / "paragraphs.jsonl", corpus.paragraphs);
  write_jsonl(dir / "segments.jsonl", corpus.segments);
  write_jsonl(dir / "systems.jsonl", corpus.systems);
  write_jsonl(dir / "evaluators.jsonl", corpus.evaluators);
  save_judgments(corpus.mqm, corpus.sqm, corpus.bws, corpus.free, dir);
}

CorpusStats corpus_stats(const Corpus& corpus) {
  struct Acc {
    std::size_t paragraphs = 0;
    std::size_t segments = 0;
    std::size_t source_sentences = 0;
    std::size_t target_sentences = 0;
  };
  std::map<std::string, Acc> acc;
  for (const auto& [id, p] : corpus.paragraphs) {
    auto& a = acc[p.pair().key()];
    ++a.paragraphs;
    a.source_sentences += static_cast<std::size_t>(p.sentence_count);
  }
  for (const auto& [id, s] : corpus.segments) {
    auto& a = acc[corpus.paragraph(s.source_id).pair().key()];
    ++a.segments;
    a.target_sentences += static_cast<std::size_t>(s.sentence_count);
  }
  auto finish = [](const std::string& key, const Acc& a) {
    PairStats s;
    s.pair = key;
    s.paragraph_count = a.paragraphs;
    s.segment_count = a.segments;
    s.sentence_count = a.target_sentences;
    s.mean_source_sentences =
        a.paragraphs ? static_cast<double>(a.source_sentences) / a.paragraphs : 0.0;
    s.mean_target_sentences =
        a.segments ? static_cast<double>(a.target_sentences) / a.segments : 0.0;
    return s;
  };
  CorpusStats out;
  Acc total;
  for (const auto& [key, a] : acc) {
    out.pairs.push_back(finish(key, a));
    total.paragraphs += a.paragraphs;
    total.segments += a.segments;
    total.source_sentences += a.source_sentences;
    total.target_sentences += a.target_sentences;
  }
  out.total = finish("total", total);
  return out;
}

std::vector<std::string> default_abbreviations() {
  return {"Dr.", "Mr.", "Mrs.", "Nr.", "z.B.", "bzw.", "etc."};
}

int count_sentences(std::string_view text, std::string_view language) {
  static const auto abbreviations = default_abbreviations();
  return count_sentences(text, language, abbreviations);
}

int count_sentences(std::string_view text, std::string_view /*language*/,
                    const std::vector<std::string>& abbreviations) {
  const auto cps = unicode::decode(text);
  const bool has_content = std::any_of(cps.begin(), cps.end(),
                                       [](char32_t c) { return !unicode::is_space(c); });
  if (!has_content) throw CorpusError(CorpusError::Kind::empty_text, "cannot count sentences of empty text");

  std::vector<std::u32string> abbrevs;
  abbrevs.reserve(abbreviations.size());
  for (const auto& a : abbreviations) abbrevs.push_back(unicode::decode(a));

  int count = 0;
  bool pending = false;  // content seen since the last boundary
  std::size_t word_start = 0;
  std::size_t i = 0;
  while (i < cps.size()) {
    const char32_t c = cps[i];
    if (unicode::is_space(c)) {
      word_start = i + 1;
      ++i;
      continue;
    }
    if (!is_terminal(c)) {
      pending = true;
      ++i;
      continue;
    }
    // Absorb the whole run of terminals and closing punctuation.
    bool cjk = false;
    std::size_t j = i;
    while (j < cps.size() && (is_terminal(cps[j]) || is_closer(cps[j]))) {
      cjk = cjk || is_cjk_terminal(cps[j]);
      ++j;
    }
    pending = true;
    bool boundary = cjk || j == cps.size() || unicode::is_space(cps[j]);
    if (boundary && !cjk && c == U'.') {
      std::size_t ws = word_start;
      while (ws < i && is_opener(cps[ws])) ++ws;
      const std::u32string_view token(cps.data() + ws, i + 1 - ws);
      if (std::find(abbrevs.begin(), abbrevs.end(), token) != abbrevs.end()) boundary = false;
    }
    if (boundary) {
      ++count;
      pending = false;
    }
    i = j;
  }
  if (pending) ++count;
  return std::max(count, 1);
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char ch = line[i];
    if (quoted) {
      if (ch == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cur.push_back('"');
        ++i;
      } else if (ch == '"') {
        quoted = false;
      } else {
        cur.push_back(ch);
      }
    } else if (ch == '"') {
      quoted = true;
    } else if (ch == ',') {
      out.push_back(std::move(cur));
      cur.clear();
    } else {
      cur.push_back(ch);
    }
  }
  out.push_back(std::move(cur));
  for (auto& f : out) {
    const auto b = f.find_first_not_of(" \t");
    const auto e = f.find_last_not_of(" \t");
    f = b == std::string::npos ? std::string() : f.substr(b, e - b + 1);
  }
  return out;
}

}  // namespace

MetricImport import_metric_scores(const fs::path& csv, const Corpus& corpus) {
  std::ifstream in(csv);
  if (!in) throw CorpusError(CorpusError::Kind::io, "cannot open " + csv.string());
  return import_metric_scores(in, corpus);
}

MetricImport import_metric_scores(std::istream& in, const Corpus& corpus) {
  std::string line;
  if (!std::getline(in, line)) throw CorpusError(CorpusError::Kind::parse, "metric csv: missing header");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  const auto header = split_csv_line(line);
  auto column = [&](std::string_view name) -> std::size_t {
    auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) {
      throw CorpusError(CorpusError::Kind::parse,
                        "metric csv: header lacks column " + std::string(name));
    }
    return static_cast<std::size_t>(it - header.begin());
  };
  const auto seg_col = column("segment_id");
  const auto metric_col = column("metric_id");
  const auto value_col = column("value");
  const auto width = std::max({seg_col, metric_col, value_col}) + 1;

  MetricImport out;
  std::map<std::pair<std::string, std::string>, std::size_t> seen;
  std::size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    const auto fields = split_csv_line(line);
    const auto where = "metric csv row " + std::to_string(row);
    if (fields.size() < width) throw CorpusError(CorpusError::Kind::parse, where + ": too few columns");
    const auto& seg = fields[seg_col];
    if (!corpus.segments.contains(seg)) {
      throw CorpusError(CorpusError::Kind::reference, where + ": unknown segment id " + seg);
    }
    const auto& text = fields[value_col];
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc() || ptr != text.data() + text.size()) {
      throw CorpusError(CorpusError::Kind::parse, where + ": non-numeric value '" + text + "'");
    }
    MetricScore s{seg, fields[metric_col], value};
    auto key = std::make_pair(s.segment_id, s.metric_id);
    if (auto it = seen.find(key); it != seen.end()) {
      out.warnings.push_back(where + ": duplicate (" + seg + ", " + s.metric_id +
                             "), keeping the last value");
      out.scores[it->second] = std::move(s);
    } else {
      seen.emplace(std::move(key), out.scores.size());
      out.scores.push_back(std::move(s));
    }
  }
  return out;
}

std::map<std::string, std::map<std::string, double>> by_metric(
    const std::vector<MetricScore>& scores) {
  std::map<std::string, std::map<std::string, double>> out;
  for (const auto& s : scores) out[s.metric_id][s.segment_id] = s.value;
  return out;
}

}  // namespace liteval
