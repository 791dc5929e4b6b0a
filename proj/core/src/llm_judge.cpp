#include "liteval/llm_judge.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <atomic>
#include <cctype>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <thread>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "liteval/agreement.hpp"
#include "liteval/unicode.hpp"

namespace liteval {

using nlohmann::json;

std::string_view to_string(TemplateId id) {
  switch (id) {
    case TemplateId::gemba_original: return "gemba_original";
    case TemplateId::gemba_literary: return "gemba_literary";
    case TemplateId::rubric_sqm: return "rubric_sqm";
  }
  return "gemba_literary";
}

std::optional<TemplateId> parse_template_id(std::string_view s) {
  if (s == "gemba_original" || s == "original") return TemplateId::gemba_original;
  if (s == "gemba_literary" || s == "literary") return TemplateId::gemba_literary;
  if (s == "rubric_sqm" || s == "rubric") return TemplateId::rubric_sqm;
  return std::nullopt;
}

std::string_view to_string(JudgeSeverity s) {
  switch (s) {
    case JudgeSeverity::critical: return "critical";
    case JudgeSeverity::major: return "major";
    case JudgeSeverity::minor: return "minor";
  }
  return "minor";
}

std::string language_name(std::string_view code) {
  std::string c;
  for (char ch : code) c.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(ch))));
  if (c == "en") return "English";
  if (c == "de") return "German";
  if (c == "zh") return "Chinese";
  throw PromptError("no language name for '" + std::string(code) + "'");
}

std::string render_query(const PromptTemplate& tmpl, std::string_view source_lang_name,
                         std::string_view source_text, std::string_view target_lang_name,
                         std::string_view target_text) {
  std::string out;
  if (tmpl.rubric) {
    const auto& r = *tmpl.rubric;
    out += tmpl.instruction_text;
    out += "\n\n###The instruction to evaluate:\nTranslate the following ";
    out += source_lang_name;
    out += " text into ";
    out += target_lang_name;
    out += ".\n";
    out += source_text;
    out += "\n\n###Response to evaluate:\n";
    out += target_text;
    out += "\n\n###Score Rubrics:\n[" + r.criteria + "]\n";
    out += "Score 0: " + r.score0_description + "\n";
    out += "Score 2: " + r.score2_description + "\n";
    out += "Score 4: " + r.score4_description + "\n";
    out += "Score 6: " + r.score6_description + "\n\n###Feedback:";
    return out;
  }
  out += source_lang_name;
  out += " source:\n```";
  out += source_text;
  out += "```\n";
  out += target_lang_name;
  out += " translation:\n```";
  out += target_text;
  out += "```\n\n";
  out += tmpl.instruction_text;
  return out;
}

std::vector<ChatMessage> build_prompt(const PromptTemplate& tmpl, std::string_view source_lang,
                                      std::string_view source_text, std::string_view target_lang,
                                      std::string_view target_text) {
  const auto src = language_name(source_lang);
  const auto tgt = language_name(target_lang);
  std::vector<ChatMessage> out;
  out.push_back({"system", tmpl.system_text});
  for (const auto& shot : tmpl.few_shots) {
    out.push_back({"user", render_query(tmpl, shot.source_lang, shot.source_seg, shot.target_lang,
                                        shot.target_seg)});
    out.push_back({"assistant", shot.answer});
  }
  out.push_back({"user", render_query(tmpl, src, source_text, tgt, target_text)});
  return out;
}

std::vector<ChatMessage> build_prompt(const PromptTemplate& tmpl, const SourceParagraph& source,
                                      const TranslationSegment& translation) {
  return build_prompt(tmpl, source.language, source.text, source.target_language,
                      translation.text);
}

// ---------------------------------------------------------------- parsing

namespace {

std::string lower(std::string_view s) {
  std::string out(s);
  for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

std::string trim(std::string_view s) {
  auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

bool starts_with_ci(std::string_view s, std::size_t pos, std::string_view prefix) {
  if (pos + prefix.size() > s.size()) return false;
  for (std::size_t i = 0; i < prefix.size(); ++i) {
    if (std::tolower(static_cast<unsigned char>(s[pos + i])) != prefix[i]) return false;
  }
  return true;
}

struct Header {
  std::size_t start;
  std::size_t body;
  JudgeSeverity severity;
};

std::vector<Header> find_headers(std::string_view text) {
  static const std::pair<std::string_view, JudgeSeverity> names[] = {
      {"critical", JudgeSeverity::critical},
      {"major", JudgeSeverity::major},
      {"minor", JudgeSeverity::minor},
  };
  std::vector<Header> out;
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (i > 0 && std::isalpha(static_cast<unsigned char>(text[i - 1]))) continue;
    for (const auto& [name, sev] : names) {
      if (!starts_with_ci(text, i, name)) continue;
      std::size_t j = i + name.size();
      while (j < text.size() && (text[j] == '*' || text[j] == ' ')) ++j;
      if (j < text.size() && text[j] == ':') {
        ++j;
        while (j < text.size() && text[j] == '*') ++j;
        out.push_back({i, j, sev});
        i = j - 1;
      }
      break;
    }
  }
  return out;
}

struct Quote {
  std::string_view open;
  std::vector<std::string_view> close;
};

const Quote kQuotes[] = {
    {"``", {"''", "``"}},
    {"\"", {"\""}},
    {"\xE2\x80\x9C", {"\xE2\x80\x9D", "\""}},  // curly double
    {"\xE2\x80\x98", {"\xE2\x80\x99", "'"}},   // curly single
    {"\xE2\x80\x9E", {"\xE2\x80\x9C", "\""}},  // low double
    {"'", {"'"}},
    {"`", {"`"}},
};

const Quote* quote_at(std::string_view s, std::size_t pos) {
  for (const auto& q : kQuotes) {
    if (s.substr(pos, q.open.size()) == q.open) return &q;
  }
  return nullptr;
}

bool ends_token(std::string_view s, std::size_t pos) {
  return pos >= s.size() || !std::isalnum(static_cast<unsigned char>(s[pos]));
}

// Position and length of the closing quote, searching from pos on the same
// line. The matching closer wins over the fallbacks, so a curly-quoted span
// may contain straight quotes.
std::pair<std::size_t, std::size_t> find_close(std::string_view s, std::size_t pos, const Quote& q) {
  const auto eol = std::min(s.find('\n', pos), s.size());
  for (auto c : q.close) {
    for (std::size_t i = pos; i < eol; ++i) {
      if (s.substr(i, c.size()) != c) continue;
      // Apostrophes inside words are not closers.
      if ((c == "'" || c == "\xE2\x80\x99") && !ends_token(s, i + c.size())) continue;
      return {i, c.size()};
    }
  }
  return {std::string_view::npos, 0};
}

bool category_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '/' || c == '_' || c == '-' || c == ' ';
}

std::string normalize_path(std::string_view raw) {
  std::string out;
  for (char c : lower(trim(raw))) {
    if (c == ' ' && (out.empty() || out.back() == '/' || out.back() == ' ')) continue;
    if (c == '/' && !out.empty() && out.back() == ' ') out.pop_back();
    out.push_back(c);
  }
  while (!out.empty() && (out.back() == ' ' || out.back() == '-')) out.pop_back();
  return out;
}

void parse_block(std::string_view s, JudgeSeverity severity, std::vector<JudgeError>& out) {
  std::size_t pos = 0;
  while (pos < s.size()) {
    const unsigned char c = static_cast<unsigned char>(s[pos]);
    if (!std::isalpha(c)) {
      ++pos;
      continue;
    }
    if (starts_with_ci(s, pos, "no-error") || starts_with_ci(s, pos, "no error") ||
        starts_with_ci(s, pos, "no_error")) {
      pos += 8;
      continue;
    }
    const auto cat_start = pos;
    while (pos < s.size() && category_char(s[pos])) {
      if (s[pos] == ' ' && pos + 1 < s.size() && s[pos + 1] == '-' &&
          (pos + 2 >= s.size() || s[pos + 2] == ' ' || quote_at(s, pos + 2))) {
        break;
      }
      if (s[pos] == '-' && pos + 1 < s.size() && quote_at(s, pos + 1)) break;
      ++pos;
    }
    std::string path = normalize_path(s.substr(cat_start, pos - cat_start));
    while (pos < s.size() && s[pos] == ' ') ++pos;
    if (pos < s.size() && s[pos] == '(') {
      const auto close = s.find(')', pos);
      if (close != std::string_view::npos) {
        auto q = normalize_path(s.substr(pos + 1, close - pos - 1));
        std::replace(q.begin(), q.end(), ' ', '-');
        if (!q.empty()) path += "/" + q;
        pos = close + 1;
      }
    }
    while (pos < s.size() && (s[pos] == ' ' || s[pos] == '-' || s[pos] == ':')) ++pos;
    std::string span;
    if (const Quote* q = pos < s.size() ? quote_at(s, pos) : nullptr) {
      const auto open_end = pos + q->open.size();
      auto [close, len] = find_close(s, open_end, *q);
      if (close == std::string_view::npos) {
        const auto eol = std::min(s.find('\n', open_end), s.size());
        span = trim(s.substr(open_end, eol - open_end));
        pos = eol;
      } else {
        span = std::string(s.substr(open_end, close - open_end));
        pos = close + len;
      }
    } else {
      const auto eol = std::min(s.find('\n', pos), s.size());
      span = trim(s.substr(pos, eol - pos));
      pos = eol;
    }
    if (path.empty()) continue;
    out.push_back({severity, std::move(path), std::move(span)});
  }
}

}  // namespace

ParsedResponse parse_judge_response(std::string_view text) {
  ParsedResponse out;
  const auto headers = find_headers(text);
  if (headers.empty()) return out;
  out.ok = true;
  for (std::size_t i = 0; i < headers.size(); ++i) {
    const auto end = i + 1 < headers.size() ? headers[i + 1].start : text.size();
    parse_block(text.substr(headers[i].body, end - headers[i].body), headers[i].severity, out.errors);
  }
  return out;
}

std::string render_judge_errors(const std::vector<JudgeError>& errors) {
  std::string out;
  for (auto sev : {JudgeSeverity::critical, JudgeSeverity::major, JudgeSeverity::minor}) {
    std::string name(to_string(sev));
    name[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(name[0])));
    if (!out.empty()) out += "\n";
    out += name + ":";
    bool any = false;
    for (const auto& e : errors) {
      if (e.severity != sev) continue;
      any = true;
      const bool curly = e.span_text.find('"') != std::string::npos;
      out += "\n" + e.category_path + " - " + (curly ? "\xE2\x80\x9C" : "\"") + e.span_text +
             (curly ? "\xE2\x80\x9D" : "\"");
    }
    if (!any) out += "\nno-error";
  }
  return out;
}

std::optional<int> parse_rubric_response(std::string_view text) {
  const auto tag = text.rfind("[RESULT]");
  if (tag == std::string_view::npos) return std::nullopt;
  std::size_t pos = tag + 8;
  while (pos < text.size() && (text[pos] == ' ' || text[pos] == ':' || text[pos] == '(')) ++pos;
  if (pos >= text.size() || !std::isdigit(static_cast<unsigned char>(text[pos]))) return std::nullopt;
  int v = 0;
  while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
    v = v * 10 + (text[pos] - '0');
    if (v > SQMRating::kMax) return std::nullopt;
    ++pos;
  }
  return v;
}

double JudgeWeights::weight(JudgeSeverity s) const {
  switch (s) {
    case JudgeSeverity::critical: return critical;
    case JudgeSeverity::major: return major;
    case JudgeSeverity::minor: return minor;
  }
  return minor;
}

double judge_score(const std::vector<JudgeError>& errors, const JudgeWeights& weights,
                   int sentence_count) {
  double sum = 0.0;
  for (const auto& e : errors) sum += weights.weight(e.severity);
  if (weights.normalize_per_sentence) {
    if (sentence_count < 1) throw std::invalid_argument("judge_score: sentence_count < 1");
    sum /= sentence_count;
  }
  return sum == 0.0 ? 0.0 : -sum;
}

MajorCategory judge_category(std::string_view category_path) {
  const auto head = lower(category_path.substr(0, category_path.find('/')));
  std::string key;
  for (char c : head) {
    if (std::isalpha(static_cast<unsigned char>(c))) key.push_back(c);
  }
  if (key == "accuracy") return MajorCategory::Accuracy;
  if (key == "fluency") return MajorCategory::Fluency;
  if (key == "style") return MajorCategory::Style;
  if (key == "terminology") return MajorCategory::Terminology;
  if (key == "localeconvention" || key == "locale") return MajorCategory::LocaleConvention;
  if (key == "nontranslation") return MajorCategory::NonTranslation;
  return MajorCategory::Others;
}

// ---------------------------------------------------------------- transport

HttpChatClient::HttpChatClient(std::string endpoint, std::string api_key, int timeout_seconds)
    : api_key_(std::move(api_key)), timeout_seconds_(timeout_seconds) {
  const auto scheme = endpoint.find("://");
  if (scheme == std::string::npos) throw std::invalid_argument("endpoint needs a scheme: " + endpoint);
  const auto slash = endpoint.find('/', scheme + 3);
  base_ = endpoint.substr(0, slash);
  path_ = slash == std::string::npos ? "/" : endpoint.substr(slash);
}

std::string HttpChatClient::complete(const ChatRequest& request) {
  json body{{"model", request.model}, {"temperature", request.temperature}};
  body["messages"] = json::array();
  for (const auto& m : request.messages) body["messages"].push_back({{"role", m.role}, {"content", m.content}});

  httplib::Client cli(base_);
  cli.set_connection_timeout(timeout_seconds_);
  cli.set_read_timeout(timeout_seconds_);
  cli.set_bearer_token_auth(api_key_);
  auto res = cli.Post(path_, body.dump(), "application/json");
  if (!res) throw TransportError("request failed: " + httplib::to_string(res.error()));
  if (res->status != 200) {
    throw TransportError("HTTP " + std::to_string(res->status) + ": " + res->body.substr(0, 200));
  }
  try {
    const auto reply = json::parse(res->body);
    return reply.at("choices").at(0).at("message").at("content").get<std::string>();
  } catch (const json::exception& e) {
    throw TransportError(std::string("malformed completion: ") + e.what());
  }
}

// ---------------------------------------------------------------- cache

ResponseCache::ResponseCache(std::filesystem::path dir) : dir_(std::move(dir)) {
  std::filesystem::create_directories(dir_);
}

std::string ResponseCache::key(const ChatRequest& request, std::string_view segment_id,
                               TemplateId template_id, int query_index) {
  json j{{"model", request.model},
         {"temperature", request.temperature},
         {"segment", segment_id},
         {"template", to_string(template_id)},
         {"query", query_index}};
  j["messages"] = json::array();
  for (const auto& m : request.messages) j["messages"].push_back({m.role, m.content});
  const auto data = j.dump();
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
    throw std::runtime_error("sha256 failed");
  }
  std::string hex;
  char buf[3];
  for (unsigned int i = 0; i < len; ++i) {
    std::snprintf(buf, sizeof buf, "%02x", digest[i]);
    hex += buf;
  }
  return hex;
}

std::optional<std::string> ResponseCache::get(const std::string& key) const {
  std::lock_guard lock(mu_);
  std::ifstream in(dir_ / (key + ".json"));
  if (!in) return std::nullopt;
  try {
    return json::parse(in).at("response").get<std::string>();
  } catch (const json::exception&) {
    return std::nullopt;
  }
}

void ResponseCache::put(const std::string& key, const std::string& response) const {
  std::lock_guard lock(mu_);
  const auto tmp = dir_ / (key + ".tmp");
  {
    std::ofstream out(tmp);
    out << json{{"response", response}}.dump();
  }
  std::filesystem::rename(tmp, dir_ / (key + ".json"));
}

// ---------------------------------------------------------------- runs

std::vector<JudgeInput> judge_inputs(const Corpus& corpus,
                                     const std::vector<std::string>& segment_ids) {
  std::vector<JudgeInput> out;
  out.reserve(segment_ids.size());
  for (const auto& id : segment_ids) {
    const auto& seg = corpus.segment(id);
    const auto& para = corpus.paragraph(seg.source_id);
    out.push_back({id, para.language, para.text, para.target_language, seg.text, seg.sentence_count});
  }
  return out;
}

std::vector<JudgeRun> run_judge(ChatClient& client, const std::vector<JudgeInput>& inputs,
                                TemplateId template_id, double temperature, int n_queries,
                                const JudgeOptions& options) {
  if (n_queries < 1) throw std::invalid_argument("run_judge: n_queries < 1");
  const auto& tmpl = prompt_template(template_id);
  std::optional<ResponseCache> cache;
  if (options.cache_dir) cache.emplace(*options.cache_dir);

  const std::size_t total = inputs.size() * static_cast<std::size_t>(n_queries);
  std::vector<JudgeRun> runs(total);
  std::vector<char> from_cache(total, 0);
  std::atomic<std::size_t> next{0};

  auto backoff = options.backoff ? options.backoff : [](int attempt) {
    std::this_thread::sleep_for(std::chrono::milliseconds(200 << std::min(attempt, 6)));
  };

  auto work = [&] {
    for (std::size_t i = next++; i < total; i = next++) {
      const auto& in = inputs[i / n_queries];
      auto& run = runs[i];
      run.segment_id = in.segment_id;
      run.template_id = template_id;
      run.temperature = temperature;
      run.query_index = static_cast<int>(i % n_queries);

      ChatRequest req{options.model,
                      build_prompt(tmpl, in.source_lang, in.source_text, in.target_lang, in.target_text),
                      temperature};
      std::string key;
      std::optional<std::string> response;
      if (cache) {
        key = ResponseCache::key(req, in.segment_id, template_id, run.query_index);
        response = cache->get(key);
        from_cache[i] = response.has_value();
      }
      for (int attempt = 0; !response; ++attempt) {
        try {
          response = client.complete(req);
        } catch (const TransportError& e) {
          if (attempt + 1 >= std::max(1, options.max_retries)) {
            run.failed = true;
            run.failure = e.what();
            break;
          }
          backoff(attempt);
        }
      }
      if (!response) continue;
      if (cache && !from_cache[i]) cache->put(key, *response);
      run.raw_response = *response;
      if (template_id == TemplateId::rubric_sqm) {
        const auto score = parse_rubric_response(*response);
        run.parse_ok = score.has_value();
        run.score = score.value_or(0);
      } else {
        auto parsed = parse_judge_response(*response);
        run.parse_ok = parsed.ok;
        run.errors = std::move(parsed.errors);
        run.score = judge_score(run.errors, options.weights, in.sentence_count);
      }
    }
  };

  const int n_threads = std::max(1, std::min<int>(options.parallelism, static_cast<int>(total)));
  std::vector<std::thread> pool;
  for (int t = 1; t < n_threads; ++t) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();

  if (options.audit_log) {
    std::ofstream log(*options.audit_log, std::ios::app);
    if (!log) throw std::runtime_error("cannot open audit log " + options.audit_log->string());
    for (std::size_t i = 0; i < total; ++i) {
      const auto& r = runs[i];
      json j{{"segment_id", r.segment_id},   {"template", to_string(r.template_id)},
             {"model", options.model},       {"temperature", r.temperature},
             {"query_index", r.query_index}, {"response", r.raw_response},
             {"score", r.score},             {"parse_ok", r.parse_ok},
             {"cached", from_cache[i] != 0}};
      if (r.failed) j["failure"] = r.failure;
      log << j.dump() << '\n';
    }
  }
  return runs;
}

void save_judge_runs(const std::vector<JudgeRun>& runs, const std::filesystem::path& file) {
  std::ofstream out(file);
  if (!out) throw std::runtime_error("cannot write " + file.string());
  for (const auto& r : runs) {
    json errors = json::array();
    for (const auto& e : r.errors) {
      errors.push_back({{"severity", to_string(e.severity)}, {"category", e.category_path}, {"span", e.span_text}});
    }
    json j{{"segment_id", r.segment_id},   {"template", to_string(r.template_id)},
           {"temperature", r.temperature}, {"query_index", r.query_index},
           {"score", r.score},             {"parse_ok", r.parse_ok},
           {"failed", r.failed},           {"errors", std::move(errors)},
           {"response", r.raw_response}};
    if (r.failed) j["failure"] = r.failure;
    out << j.dump() << '\n';
  }
}

std::vector<JudgeRun> load_judge_runs(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw std::runtime_error("cannot open " + file.string());
  std::vector<JudgeRun> out;
  int lineno = 0;
  for (std::string line; std::getline(in, line);) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      const auto j = json::parse(line);
      JudgeRun r;
      r.segment_id = j.at("segment_id").get<std::string>();
      const auto t = parse_template_id(j.at("template").get<std::string>());
      if (!t) throw std::invalid_argument("unknown template");
      r.template_id = *t;
      r.temperature = j.at("temperature").get<double>();
      r.query_index = j.at("query_index").get<int>();
      r.score = j.at("score").get<double>();
      r.parse_ok = j.value("parse_ok", true);
      r.failed = j.value("failed", false);
      r.failure = j.value("failure", "");
      r.raw_response = j.value("response", "");
      for (const auto& e : j.value("errors", json::array())) {
        const auto sev = e.at("severity").get<std::string>();
        JudgeError err;
        err.severity = sev == "critical" ? JudgeSeverity::critical
                       : sev == "major"  ? JudgeSeverity::major
                                         : JudgeSeverity::minor;
        err.category_path = e.at("category").get<std::string>();
        err.span_text = e.value("span", "");
        r.errors.push_back(std::move(err));
      }
      out.push_back(std::move(r));
    } catch (const std::exception& e) {
      throw std::runtime_error(file.string() + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
  return out;
}

JudgeConfig load_judge_config(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw std::runtime_error("cannot open judge config " + file.string());
  JudgeConfig cfg;
  try {
    const auto j = json::parse(in);
    if (j.contains("api_key")) {
      throw std::runtime_error("judge config must not hold credentials; set " +
                               std::string(kApiKeyEnv));
    }
    cfg.endpoint = j.value("endpoint", cfg.endpoint);
    cfg.model = j.value("model", cfg.model);
    cfg.temperatures = j.value("temperatures", cfg.temperatures);
    cfg.n_queries = j.value("n_queries", cfg.n_queries);
    cfg.parallelism = j.value("parallelism", cfg.parallelism);
  } catch (const json::exception& e) {
    throw std::runtime_error("judge config " + file.string() + ": " + e.what());
  }
  if (cfg.n_queries < 1 || cfg.parallelism < 1 || cfg.temperatures.empty()) {
    throw std::runtime_error("judge config " + file.string() + ": invalid values");
  }
  return cfg;
}

// ---------------------------------------------------------------- analysis

std::vector<ConsistencyRow> consistency_analysis(const std::vector<JudgeRun>& runs) {
  // temperature -> query index -> segment -> score
  std::map<double, std::map<int, std::map<std::string, double>>> grid;
  for (const auto& r : runs) {
    if (r.failed) continue;
    grid[r.temperature][r.query_index][r.segment_id] = r.score;
  }
  std::vector<ConsistencyRow> out;
  for (const auto& [temp, queries] : grid) {
    if (queries.size() < 2) {
      throw std::invalid_argument("consistency_analysis: fewer than two queries at temperature " +
                                  std::to_string(temp));
    }
    ConsistencyRow row;
    row.temperature = temp;
    row.n_queries = static_cast<int>(queries.size());
    double rho_sum = 0.0;
    int n_pairs = 0;
    std::size_t le1 = 0, mid = 0, gt5 = 0;
    for (auto a = queries.begin(); a != queries.end(); ++a) {
      for (auto b = std::next(a); b != queries.end(); ++b) {
        std::vector<double> x, y;
        for (const auto& [seg, s] : a->second) {
          auto it = b->second.find(seg);
          if (it == b->second.end()) continue;
          x.push_back(s);
          y.push_back(it->second);
          const double d = std::abs(s - it->second);
          if (d <= 1.0) ++le1;
          else if (d <= 5.0) ++mid;
          else ++gt5;
        }
        rho_sum += spearman_rho(x, y);
        ++n_pairs;
      }
    }
    row.mean_spearman = rho_sum / n_pairs;
    row.n_differences = le1 + mid + gt5;
    if (row.n_differences) {
      const double n = static_cast<double>(row.n_differences);
      row.pct_delta_le_1 = 100.0 * le1 / n;
      row.pct_delta_1_5 = 100.0 * mid / n;
      row.pct_delta_gt_5 = 100.0 * gt5 / n;
    }
    out.push_back(row);
  }
  return out;
}

SegmentScores judge_segment_scores(const std::vector<JudgeRun>& runs) {
  std::map<std::string, std::pair<double, int>> acc;
  for (const auto& r : runs) {
    if (r.failed || !r.parse_ok) continue;
    auto& [sum, n] = acc[r.segment_id];
    sum += r.score;
    ++n;
  }
  SegmentScores out;
  for (const auto& [id, a] : acc) out.emplace(id, a.first / a.second);
  return out;
}

namespace {

double tau_over_shared(const SegmentScores& metric, const SegmentScores& human, std::size_t* n) {
  std::vector<double> x, y;
  for (const auto& [id, s] : metric) {
    auto it = human.find(id);
    if (it == human.end()) continue;
    x.push_back(s);
    y.push_back(it->second);
  }
  if (n) *n = x.size();
  return kendall_tau_b(x, y);
}

}  // namespace

double segment_correlation(const SegmentScores& metric, const SegmentScores& human) {
  return tau_over_shared(metric, human, nullptr);
}

std::vector<CorrelationRow> segment_correlation_by_pair(const Corpus& corpus,
                                                        const SegmentScores& metric,
                                                        const SegmentScores& human) {
  std::map<std::string, SegmentScores> split;
  for (const auto& [id, s] : metric) split[corpus.pair_of(id).key()].emplace(id, s);
  std::vector<CorrelationRow> out;
  for (const auto& [pair, part] : split) {
    CorrelationRow row;
    row.pair = pair;
    row.tau = tau_over_shared(part, human, &row.n);
    out.push_back(row);
  }
  CorrelationRow all;
  all.pair = "all";
  all.tau = tau_over_shared(metric, human, &all.n);
  out.push_back(all);
  return out;
}

double category_correlation(const Corpus& corpus, const std::vector<JudgeRun>& runs,
                            MajorCategory category, const SeverityWeights& human_weights,
                            const JudgeWeights& judge_weights) {
  std::map<std::string, std::pair<double, int>> human_acc;
  for (const auto& a : corpus.mqm) {
    MQMAnnotation only{a.segment_id, a.evaluator_id, {}};
    for (const auto& s : a.spans) {
      if (s.category.major == category) only.spans.push_back(s);
    }
    auto& [sum, n] = human_acc[a.segment_id];
    sum += mqm_score(only, corpus.segment(a.segment_id).sentence_count, human_weights);
    ++n;
  }
  SegmentScores human;
  for (const auto& [id, a] : human_acc) human.emplace(id, a.first / a.second);

  std::map<std::string, std::pair<double, int>> judge_acc;
  for (const auto& r : runs) {
    if (r.failed || !r.parse_ok) continue;
    std::vector<JudgeError> only;
    for (const auto& e : r.errors) {
      if (judge_category(e.category_path) == category) only.push_back(e);
    }
    auto& [sum, n] = judge_acc[r.segment_id];
    const auto it = corpus.segments.find(r.segment_id);
    sum += judge_score(only, judge_weights, it == corpus.segments.end() ? 1 : it->second.sentence_count);
    ++n;
  }
  SegmentScores judge;
  for (const auto& [id, a] : judge_acc) judge.emplace(id, a.first / a.second);
  return segment_correlation(judge, human);
}

double length_bias(const SegmentScores& scores, const Corpus& corpus, CorrelationMeasure measure) {
  std::vector<double> len, val;
  for (const auto& [id, s] : scores) {
    len.push_back(static_cast<double>(unicode::length(corpus.segment(id).text)));
    val.push_back(s);
  }
  switch (measure) {
    case CorrelationMeasure::pearson: return pearson_r(len, val);
    case CorrelationMeasure::spearman: return spearman_rho(len, val);
    case CorrelationMeasure::kendall: return kendall_tau_b(len, val);
  }
  return pearson_r(len, val);
}

}  // namespace liteval
