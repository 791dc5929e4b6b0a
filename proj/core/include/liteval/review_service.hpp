#pragma once
// Annotation task dispenser. Evaluators pull blind tasks (candidate ids only,
// never system or segment ids) and post judgments, which are appended to a
// JSONL journal and replayed on restart.

#include <filesystem>
#include <iosfwd>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "liteval/annotation_model.hpp"
#include "liteval/corpus_io.hpp"

namespace liteval {

enum class ReviewScheme { mqm, sqm, bws, free };

std::string_view to_string(ReviewScheme s);
std::optional<ReviewScheme> parse_review_scheme(std::string_view s);

enum class TaskStatus { open, done };

struct ReviewTask {
  std::string task_id;
  ReviewScheme scheme = ReviewScheme::mqm;
  std::string evaluator_id;
  std::string source_id;
  std::vector<std::string> segment_ids;  // candidate order as served

  bool operator==(const ReviewTask&) const = default;
};

class ReviewError : public std::runtime_error {
 public:
  enum class Kind { not_found, invalid, conflict, scheme_mismatch, io };

  ReviewError(Kind kind, const std::string& what, std::vector<std::string> violations = {})
      : std::runtime_error(what), kind_(kind), violations_(std::move(violations)) {}
  Kind kind() const noexcept { return kind_; }
  const std::vector<std::string>& violations() const noexcept { return violations_; }

 private:
  Kind kind_;
  std::vector<std::string> violations_;
};

// tasks.jsonl: {task_id, scheme, evaluator_id, segment_ids[, source_id]}.
// Candidates are reordered by a hash of task_id.
std::vector<ReviewTask> load_tasks(const std::filesystem::path& file, const Corpus& corpus);
std::vector<ReviewTask> parse_tasks(std::istream& in, const Corpus& corpus);

// Deterministic permutation seeded by task_id.
std::vector<std::string> blind_order(const std::string& task_id, std::vector<std::string> ids);

struct SchemeProgress {
  std::size_t total = 0;
  std::size_t done = 0;
};

struct ReviewProgress {
  std::string evaluator_id;
  std::size_t total = 0;
  std::size_t done = 0;
  std::map<std::string, SchemeProgress> by_scheme;
};

class ReviewService {
 public:
  // Replays an existing journal; a truncated last line is dropped.
  ReviewService(Corpus corpus, std::vector<ReviewTask> tasks, std::filesystem::path journal);

  // Blind payload of the evaluator's open task with the lowest id.
  std::optional<nlohmann::json> next_task(const std::string& evaluator_id,
                                          std::optional<ReviewScheme> scheme = std::nullopt) const;
  nlohmann::json task_payload(const std::string& task_id) const;

  // Body: {task_id, scheme, ...} with spans (mqm, free), score (sqm) or
  // best/worst candidate ids (bws). Returns the ack.
  nlohmann::json submit(const nlohmann::json& body);

  ReviewProgress progress(const std::string& evaluator_id) const;
  TaskStatus status(const std::string& task_id) const;

  void export_judgments(const std::filesystem::path& dir) const;

  const Corpus& corpus() const { return corpus_; }
  const std::vector<ReviewTask>& tasks() const { return tasks_; }
  std::vector<std::string> replay_warnings() const { return replay_warnings_; }

 private:
  struct State;

  std::shared_ptr<const State> snapshot() const;
  const ReviewTask& task(const std::string& task_id) const;
  nlohmann::json judgment_for(const ReviewTask& task, const nlohmann::json& body) const;
  void apply(State& state, const ReviewTask& task, const nlohmann::json& record) const;

  Corpus corpus_;
  std::vector<ReviewTask> tasks_;
  std::map<std::string, std::size_t> task_index_;
  std::filesystem::path journal_;
  std::vector<std::string> replay_warnings_;
  std::shared_ptr<const State> state_;
  std::mutex write_mu_;
};

// HTTP front end: GET /api/tasks/next, POST /api/submissions,
// GET /api/progress, and static files from ui_dir at "/".
class ReviewServer {
 public:
  ReviewServer(ReviewService& service, std::optional<std::filesystem::path> ui_dir = std::nullopt);
  ~ReviewServer();

  // Returns the bound port, or -1.
  int bind(const std::string& host, int port);
  // Blocks until stop().
  bool listen_after_bind();
  void stop();
  void wait_until_ready() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace liteval
