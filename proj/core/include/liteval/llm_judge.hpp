#pragma once
// LLM-as-judge metrics: MQM-style error-listing prompts (original and
// literary variants), a 0/2/4/6 rubric prompt, tolerant response parsing,
// cached querying of a chat-completion endpoint, and meta-evaluation of the
// resulting scores against human judgments.

#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "liteval/annotation_model.hpp"
#include "liteval/corpus_io.hpp"
#include "liteval/scoring.hpp"

namespace liteval {

enum class TemplateId { gemba_original, gemba_literary, rubric_sqm };

std::string_view to_string(TemplateId id);
std::optional<TemplateId> parse_template_id(std::string_view s);  // also "original", "literary", "rubric"

struct FewShot {
  std::string source_lang;  // language name, e.g. "English"
  std::string source_seg;
  std::string target_lang;
  std::string target_seg;
  std::string answer;
};

struct RubricData {
  std::string criteria;
  std::string score0_description;
  std::string score2_description;
  std::string score4_description;
  std::string score6_description;
};

struct PromptTemplate {
  TemplateId id = TemplateId::gemba_original;
  std::string system_text;
  std::string instruction_text;
  std::vector<FewShot> few_shots;
  std::optional<RubricData> rubric;
};

const PromptTemplate& prompt_template(TemplateId id);

struct ChatMessage {
  std::string role;  // "system", "user", "assistant"
  std::string content;

  bool operator==(const ChatMessage&) const = default;
};

class PromptError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// "en" -> "English"; PromptError for languages without few-shot support.
std::string language_name(std::string_view code);

// System message, few-shot user/assistant turns, then the query. Pure.
std::vector<ChatMessage> build_prompt(const PromptTemplate& tmpl, std::string_view source_lang,
                                      std::string_view source_text, std::string_view target_lang,
                                      std::string_view target_text);
std::vector<ChatMessage> build_prompt(const PromptTemplate& tmpl, const SourceParagraph& source,
                                      const TranslationSegment& translation);

// The user turn of an error-listing prompt.
std::string render_query(const PromptTemplate& tmpl, std::string_view source_lang_name,
                         std::string_view source_text, std::string_view target_lang_name,
                         std::string_view target_text);

enum class JudgeSeverity { critical, major, minor };

std::string_view to_string(JudgeSeverity s);

struct JudgeError {
  JudgeSeverity severity = JudgeSeverity::minor;
  std::string category_path;  // lowercase, e.g. "accuracy/mistranslation/too-literal"
  std::string span_text;

  bool operator==(const JudgeError&) const = default;
};

struct ParsedResponse {
  std::vector<JudgeError> errors;
  bool ok = false;  // false when no severity block was found
};

ParsedResponse parse_judge_response(std::string_view text);

// Canonical multi-line answer block; parse_judge_response inverts it.
std::string render_judge_errors(const std::vector<JudgeError>& errors);

// "[RESULT] 4" style rubric answers; nullopt when absent.
std::optional<int> parse_rubric_response(std::string_view text);

struct JudgeWeights {
  double critical = 25.0;
  double major = 5.0;
  double minor = 1.0;
  bool normalize_per_sentence = false;

  double weight(JudgeSeverity s) const;
};

// -sum of severity weights, optionally divided by the sentence count.
double judge_score(const std::vector<JudgeError>& errors, const JudgeWeights& weights = {},
                   int sentence_count = 1);

// MQM major category a judge category path refers to.
MajorCategory judge_category(std::string_view category_path);

struct JudgeRun {
  std::string segment_id;
  TemplateId template_id = TemplateId::gemba_literary;
  double temperature = 0.0;
  int query_index = 0;
  std::string raw_response;
  std::vector<JudgeError> errors;
  double score = 0.0;
  bool parse_ok = false;
  bool failed = false;  // transport failure after retries
  std::string failure;
};

// One JSON object per run.
void save_judge_runs(const std::vector<JudgeRun>& runs, const std::filesystem::path& file);
std::vector<JudgeRun> load_judge_runs(const std::filesystem::path& file);

struct ChatRequest {
  std::string model;
  std::vector<ChatMessage> messages;
  double temperature = 0.0;
};

class TransportError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Chat-completion backend. complete() throws TransportError on failure and
// must be safe to call from several threads.
class ChatClient {
 public:
  virtual ~ChatClient() = default;
  virtual std::string complete(const ChatRequest& request) = 0;
};

// OpenAI-compatible POST <endpoint> with a bearer credential.
class HttpChatClient : public ChatClient {
 public:
  HttpChatClient(std::string endpoint, std::string api_key, int timeout_seconds = 120);
  std::string complete(const ChatRequest& request) override;

 private:
  std::string base_;  // scheme://host[:port]
  std::string path_;
  std::string api_key_;
  int timeout_seconds_;
};

// Responses keyed by a SHA-256 of everything that determines the request.
class ResponseCache {
 public:
  explicit ResponseCache(std::filesystem::path dir);

  static std::string key(const ChatRequest& request, std::string_view segment_id,
                         TemplateId template_id, int query_index);
  std::optional<std::string> get(const std::string& key) const;
  void put(const std::string& key, const std::string& response) const;

 private:
  std::filesystem::path dir_;
  mutable std::mutex mu_;
};

struct JudgeInput {
  std::string segment_id;
  std::string source_lang;  // ISO code
  std::string source_text;
  std::string target_lang;
  std::string target_text;
  int sentence_count = 1;
};

std::vector<JudgeInput> judge_inputs(const Corpus& corpus,
                                     const std::vector<std::string>& segment_ids);

struct JudgeOptions {
  std::string model = "gpt-4o-mini";
  int parallelism = 4;
  int max_retries = 3;
  JudgeWeights weights;
  std::optional<std::filesystem::path> cache_dir;
  std::optional<std::filesystem::path> audit_log;  // raw responses, JSONL
  std::function<void(int attempt)> backoff;         // default: short sleep
};

// n_queries runs per input; cached responses skip the client entirely.
std::vector<JudgeRun> run_judge(ChatClient& client, const std::vector<JudgeInput>& inputs,
                                TemplateId template_id, double temperature, int n_queries,
                                const JudgeOptions& options = {});

struct JudgeConfig {
  std::string endpoint = "https://api.openai.com/v1/chat/completions";
  std::string model = "gpt-4o-mini";
  std::vector<double> temperatures = {0.0};
  int n_queries = 3;
  int parallelism = 4;
};

JudgeConfig load_judge_config(const std::filesystem::path& file);

inline constexpr const char* kApiKeyEnv = "LITEVAL_JUDGE_API_KEY";

struct ConsistencyRow {
  double temperature = 0.0;
  double mean_spearman = 0.0;
  double pct_delta_le_1 = 0.0;
  double pct_delta_1_5 = 0.0;
  double pct_delta_gt_5 = 0.0;
  std::size_t n_differences = 0;
  int n_queries = 0;
};

// Per temperature: mean Spearman over pairs of query indices, and score
// differences bucketed as d <= 1, 1 < d <= 5, d > 5 over (segment, query
// pair). Failed runs are ignored. std::invalid_argument with fewer than two
// query indices at a temperature.
std::vector<ConsistencyRow> consistency_analysis(const std::vector<JudgeRun>& runs);

// segment_id -> mean score over successful runs.
SegmentScores judge_segment_scores(const std::vector<JudgeRun>& runs);

// Tau-b over the shared segments.
double segment_correlation(const SegmentScores& metric, const SegmentScores& human);

struct CorrelationRow {
  std::string pair;  // language pair key or "all"
  double tau = 0.0;
  std::size_t n = 0;
};
std::vector<CorrelationRow> segment_correlation_by_pair(const Corpus& corpus,
                                                        const SegmentScores& metric,
                                                        const SegmentScores& human);

// Category-restricted scores on both sides, then tau-b.
double category_correlation(const Corpus& corpus, const std::vector<JudgeRun>& runs,
                            MajorCategory category, const SeverityWeights& human_weights = {},
                            const JudgeWeights& judge_weights = {});

enum class CorrelationMeasure { pearson, spearman, kendall };

// Correlation between target length (scalar values) and score.
double length_bias(const SegmentScores& scores, const Corpus& corpus,
                   CorrelationMeasure measure = CorrelationMeasure::pearson);

}  // namespace liteval
