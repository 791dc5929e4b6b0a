#include "liteval/review_service.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <random>
#include <set>
#include <sstream>
#include <thread>

#include <httplib.h>

#include "liteval/json_codec.hpp"

namespace liteval {

using nlohmann::json;

std::string_view to_string(ReviewScheme s) {
  switch (s) {
    case ReviewScheme::mqm: return "mqm";
    case ReviewScheme::sqm: return "sqm";
    case ReviewScheme::bws: return "bws";
    case ReviewScheme::free: return "free";
  }
  return "mqm";
}

std::optional<ReviewScheme> parse_review_scheme(std::string_view s) {
  if (s == "mqm") return ReviewScheme::mqm;
  if (s == "sqm") return ReviewScheme::sqm;
  if (s == "bws") return ReviewScheme::bws;
  if (s == "free") return ReviewScheme::free;
  return std::nullopt;
}

std::vector<std::string> blind_order(const std::string& task_id, std::vector<std::string> ids) {
  std::uint64_t h = 0xcbf29ce484222325ULL;  // FNV-1a
  for (unsigned char c : task_id) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  std::mt19937_64 rng(h);
  for (std::size_t i = ids.size(); i > 1; --i) {
    const auto j = static_cast<std::size_t>(rng() % i);
    std::swap(ids[i - 1], ids[j]);
  }
  return ids;
}

namespace {

std::string candidate_id(std::size_t i) { return "c" + std::to_string(i); }

ReviewTask task_from_json(const json& j, const Corpus& corpus) {
  ReviewTask t;
  t.task_id = j.at("task_id").get<std::string>();
  const auto scheme = parse_review_scheme(j.at("scheme").get<std::string>());
  if (!scheme) throw std::invalid_argument("unknown scheme " + j.at("scheme").dump());
  t.scheme = *scheme;
  t.evaluator_id = j.at("evaluator_id").get<std::string>();
  if (j.contains("segment_ids")) {
    t.segment_ids = j.at("segment_ids").get<std::vector<std::string>>();
  } else {
    t.segment_ids = {j.at("segment_id").get<std::string>()};
  }
  if (t.task_id.empty()) throw std::invalid_argument("empty task_id");
  if (!corpus.evaluators.contains(t.evaluator_id)) {
    throw std::invalid_argument("unknown evaluator " + t.evaluator_id);
  }
  const std::size_t n = t.segment_ids.size();
  if (t.scheme == ReviewScheme::bws ? (n < 4 || n > 5) : n != 1) {
    throw std::invalid_argument("scheme " + std::string(to_string(t.scheme)) + " cannot hold " +
                                std::to_string(n) + " candidates");
  }
  if (std::set<std::string>(t.segment_ids.begin(), t.segment_ids.end()).size() != n) {
    throw std::invalid_argument("duplicate segment in task");
  }
  for (const auto& id : t.segment_ids) {
    const auto& seg = corpus.segment(id);
    if (t.source_id.empty()) t.source_id = seg.source_id;
    if (seg.source_id != t.source_id) {
      throw std::invalid_argument("segment " + id + " does not translate " + t.source_id);
    }
  }
  if (j.contains("source_id") && j.at("source_id").get<std::string>() != t.source_id) {
    throw std::invalid_argument("source_id does not match segments");
  }
  t.segment_ids = blind_order(t.task_id, std::move(t.segment_ids));
  return t;
}

std::string now_iso() {
  const auto t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace

std::vector<ReviewTask> parse_tasks(std::istream& in, const Corpus& corpus) {
  std::vector<ReviewTask> out;
  std::set<std::string> seen;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      auto t = task_from_json(json::parse(line), corpus);
      if (!seen.insert(t.task_id).second) throw std::invalid_argument("duplicate task_id " + t.task_id);
      out.push_back(std::move(t));
    } catch (const std::exception& e) {
      throw ReviewError(ReviewError::Kind::invalid, "tasks line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.task_id < b.task_id; });
  return out;
}

std::vector<ReviewTask> load_tasks(const std::filesystem::path& file, const Corpus& corpus) {
  std::ifstream in(file);
  if (!in) throw ReviewError(ReviewError::Kind::io, "cannot open " + file.string());
  return parse_tasks(in, corpus);
}

struct ReviewService::State {
  std::set<std::string> done;
  std::vector<MQMAnnotation> mqm;
  std::vector<SQMRating> sqm;
  std::vector<BWSJudgment> bws;
  std::vector<FreeAnnotation> free;
};

ReviewService::ReviewService(Corpus corpus, std::vector<ReviewTask> tasks,
                             std::filesystem::path journal)
    : corpus_(std::move(corpus)), tasks_(std::move(tasks)), journal_(std::move(journal)) {
  std::sort(tasks_.begin(), tasks_.end(), [](const auto& a, const auto& b) { return a.task_id < b.task_id; });
  for (std::size_t i = 0; i < tasks_.size(); ++i) {
    if (!task_index_.emplace(tasks_[i].task_id, i).second) {
      throw ReviewError(ReviewError::Kind::invalid, "duplicate task_id " + tasks_[i].task_id);
    }
  }
  auto state = std::make_shared<State>();
  std::ifstream in(journal_);
  if (in) {
    std::vector<std::string> lines;
    for (std::string line; std::getline(in, line);) lines.push_back(line);
    for (std::size_t i = 0; i < lines.size(); ++i) {
      if (lines[i].find_first_not_of(" \t\r") == std::string::npos) continue;
      json entry;
      try {
        entry = json::parse(lines[i]);
      } catch (const json::exception&) {
        if (i + 1 == lines.size()) {
          replay_warnings_.push_back("journal: dropped truncated last line");
          break;
        }
        throw ReviewError(ReviewError::Kind::io, "journal line " + std::to_string(i + 1) + ": not JSON");
      }
      const auto id = entry.at("task_id").get<std::string>();
      if (!task_index_.contains(id)) {
        throw ReviewError(ReviewError::Kind::io, "journal line " + std::to_string(i + 1) +
                                                     ": unknown task " + id);
      }
      if (state->done.contains(id)) {
        replay_warnings_.push_back("journal: repeated task " + id + " ignored");
        continue;
      }
      apply(*state, task(id), entry);
    }
  }
  state_ = std::move(state);
}

std::shared_ptr<const ReviewService::State> ReviewService::snapshot() const {
  return std::atomic_load(&state_);
}

const ReviewTask& ReviewService::task(const std::string& task_id) const {
  auto it = task_index_.find(task_id);
  if (it == task_index_.end()) throw ReviewError(ReviewError::Kind::not_found, "unknown task " + task_id);
  return tasks_[it->second];
}

TaskStatus ReviewService::status(const std::string& task_id) const {
  task(task_id);
  return snapshot()->done.contains(task_id) ? TaskStatus::done : TaskStatus::open;
}

json ReviewService::task_payload(const std::string& task_id) const {
  const auto& t = task(task_id);
  const auto& para = corpus_.paragraph(t.source_id);
  json candidates = json::array();
  for (std::size_t i = 0; i < t.segment_ids.size(); ++i) {
    candidates.push_back({{"candidate_id", candidate_id(i)}, {"text", corpus_.segment(t.segment_ids[i]).text}});
  }
  return {{"task_id", t.task_id},
          {"scheme", to_string(t.scheme)},
          {"evaluator_id", t.evaluator_id},
          {"source_lang", para.language},
          {"target_lang", para.target_language},
          {"source_text", para.text},
          {"candidates", std::move(candidates)},
          {"status", status(task_id) == TaskStatus::done ? "done" : "open"}};
}

std::optional<json> ReviewService::next_task(const std::string& evaluator_id,
                                             std::optional<ReviewScheme> scheme) const {
  if (!corpus_.evaluators.contains(evaluator_id)) {
    throw ReviewError(ReviewError::Kind::not_found, "unknown evaluator " + evaluator_id);
  }
  const auto state = snapshot();
  for (const auto& t : tasks_) {
    if (t.evaluator_id != evaluator_id || (scheme && t.scheme != *scheme)) continue;
    if (state->done.contains(t.task_id)) continue;
    return task_payload(t.task_id);
  }
  return std::nullopt;
}

json ReviewService::judgment_for(const ReviewTask& t, const json& body) const {
  auto invalid = [](const std::string& msg, std::vector<std::string> v = {}) {
    return ReviewError(ReviewError::Kind::invalid, msg, std::move(v));
  };
  std::vector<Violation> violations;
  json record;
  try {
    switch (t.scheme) {
      case ReviewScheme::mqm: {
        MQMAnnotation a{t.segment_ids.front(), t.evaluator_id,
                        body.value("spans", json::array()).get<std::vector<ErrorSpan>>()};
        violations = validate_annotation(a, corpus_.segment(a.segment_id));
        record = a;
        break;
      }
      case ReviewScheme::free: {
        FreeAnnotation a{t.segment_ids.front(), t.evaluator_id,
                         body.value("spans", json::array()).get<std::vector<FreeSpan>>()};
        violations = validate_annotation(a, corpus_.segment(a.segment_id));
        record = a;
        break;
      }
      case ReviewScheme::sqm: {
        if (!body.contains("score")) throw invalid("score: missing");
        SQMRating r{t.segment_ids.front(), t.evaluator_id, body.at("score").get<int>()};
        violations = validate_rating(r);
        record = r;
        break;
      }
      case ReviewScheme::bws: {
        auto resolve = [&](const char* key, const char* field) -> std::string {
          if (!body.contains(key)) throw invalid(std::string(field) + ": missing");
          const auto cid = body.at(key).get<std::string>();
          for (std::size_t i = 0; i < t.segment_ids.size(); ++i) {
            if (candidate_id(i) == cid) return t.segment_ids[i];
          }
          violations.push_back({field, "not in segment_ids"});
          return "?" + cid;
        };
        BWSJudgment j{t.task_id, t.segment_ids, resolve("best", "best_id"), resolve("worst", "worst_id"),
                      t.evaluator_id};
        if (body.at("best") == body.at("worst")) {
          j.worst_id = j.best_id;
        }
        auto more = validate_judgment(j, [&](const std::string& id) -> std::optional<std::string> {
          auto it = corpus_.segments.find(id);
          if (it == corpus_.segments.end()) return std::nullopt;
          return it->second.source_id;
        });
        for (auto& v : more) {
          if (std::find(violations.begin(), violations.end(), v) == violations.end()) violations.push_back(v);
        }
        record = j;
        break;
      }
    }
  } catch (const ReviewError&) {
    throw;
  } catch (const std::exception& e) {
    throw invalid(std::string("body: ") + e.what());
  }
  if (!violations.empty()) {
    // Internal segment ids must not leak back to the evaluator.
    auto strings = to_strings(violations);
    for (auto& s : strings) {
      for (std::size_t i = 0; i < t.segment_ids.size(); ++i) {
        for (auto pos = s.find(t.segment_ids[i]); pos != std::string::npos; pos = s.find(t.segment_ids[i])) {
          s.replace(pos, t.segment_ids[i].size(), candidate_id(i));
        }
      }
    }
    throw invalid("validation failed", std::move(strings));
  }
  return record;
}

void ReviewService::apply(State& state, const ReviewTask& t, const json& entry) const {
  const auto& rec = entry.at("record");
  switch (t.scheme) {
    case ReviewScheme::mqm: state.mqm.push_back(rec.get<MQMAnnotation>()); break;
    case ReviewScheme::sqm: state.sqm.push_back(rec.get<SQMRating>()); break;
    case ReviewScheme::bws: state.bws.push_back(rec.get<BWSJudgment>()); break;
    case ReviewScheme::free: state.free.push_back(rec.get<FreeAnnotation>()); break;
  }
  state.done.insert(t.task_id);
}

json ReviewService::submit(const json& body) {
  if (!body.is_object() || !body.contains("task_id") || !body.at("task_id").is_string()) {
    throw ReviewError(ReviewError::Kind::invalid, "task_id: missing");
  }
  const auto& t = task(body.at("task_id").get<std::string>());
  if (!body.contains("scheme") || !body.at("scheme").is_string()) {
    throw ReviewError(ReviewError::Kind::invalid, "scheme: missing");
  }
  if (body.at("scheme").get<std::string>() != to_string(t.scheme)) {
    throw ReviewError(ReviewError::Kind::scheme_mismatch,
                      "scheme mismatch: task " + t.task_id + " is " + std::string(to_string(t.scheme)));
  }
  if (body.contains("evaluator_id") && body.at("evaluator_id") != t.evaluator_id) {
    throw ReviewError(ReviewError::Kind::invalid, "evaluator_id: task assigned to another evaluator");
  }
  const auto record = judgment_for(t, body);

  std::lock_guard lock(write_mu_);
  const auto current = snapshot();
  if (current->done.contains(t.task_id)) {
    throw ReviewError(ReviewError::Kind::conflict, "task " + t.task_id + " already submitted");
  }
  json entry{{"task_id", t.task_id},
             {"timestamp", now_iso()},
             {"scheme", to_string(t.scheme)},
             {"record", record}};
  {
    std::ofstream out(journal_, std::ios::app);
    out << entry.dump() << '\n';
    out.flush();
    if (!out) throw ReviewError(ReviewError::Kind::io, "cannot append to " + journal_.string());
  }
  auto next = std::make_shared<State>(*current);
  apply(*next, t, entry);
  std::atomic_store(&state_, std::shared_ptr<const State>(std::move(next)));
  return {{"ok", true}, {"task_id", t.task_id}, {"status", "done"}};
}

ReviewProgress ReviewService::progress(const std::string& evaluator_id) const {
  if (!corpus_.evaluators.contains(evaluator_id)) {
    throw ReviewError(ReviewError::Kind::not_found, "unknown evaluator " + evaluator_id);
  }
  const auto state = snapshot();
  ReviewProgress p;
  p.evaluator_id = evaluator_id;
  for (const auto& t : tasks_) {
    if (t.evaluator_id != evaluator_id) continue;
    auto& s = p.by_scheme[std::string(to_string(t.scheme))];
    const bool done = state->done.contains(t.task_id);
    ++p.total;
    ++s.total;
    p.done += done;
    s.done += done;
  }
  return p;
}

void ReviewService::export_judgments(const std::filesystem::path& dir) const {
  const auto state = snapshot();
  try {
    save_judgments(state->mqm, state->sqm, state->bws, state->free, dir);
  } catch (const std::exception& e) {
    throw ReviewError(ReviewError::Kind::io, e.what());
  }
}

// ---------------------------------------------------------------- HTTP

struct ReviewServer::Impl {
  ReviewService& service;
  httplib::Server server;
};

namespace {

int http_status(ReviewError::Kind k) {
  switch (k) {
    case ReviewError::Kind::not_found: return 404;
    case ReviewError::Kind::invalid: return 422;
    case ReviewError::Kind::conflict: return 409;
    case ReviewError::Kind::scheme_mismatch: return 422;
    case ReviewError::Kind::io: return 500;
  }
  return 500;
}

std::string_view kind_name(ReviewError::Kind k) {
  switch (k) {
    case ReviewError::Kind::not_found: return "not_found";
    case ReviewError::Kind::invalid: return "invalid";
    case ReviewError::Kind::conflict: return "conflict";
    case ReviewError::Kind::scheme_mismatch: return "scheme_mismatch";
    case ReviewError::Kind::io: return "io";
  }
  return "io";
}

void reply(httplib::Response& res, int status, const json& body) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

template <class F>
void guarded(httplib::Response& res, F&& f) {
  try {
    f();
  } catch (const ReviewError& e) {
    reply(res, http_status(e.kind()),
          {{"ok", false}, {"error", kind_name(e.kind())}, {"message", e.what()}, {"violations", e.violations()}});
  } catch (const std::exception& e) {
    reply(res, 400, {{"ok", false}, {"error", "bad_request"}, {"message", e.what()}});
  }
}

}  // namespace

ReviewServer::ReviewServer(ReviewService& service, std::optional<std::filesystem::path> ui_dir)
    : impl_(new Impl{service, {}}) {
  auto& srv = impl_->server;
  auto& svc = impl_->service;

  srv.Get("/api/tasks/next", [&svc](const httplib::Request& req, httplib::Response& res) {
    guarded(res, [&] {
      if (!req.has_param("evaluator")) throw std::invalid_argument("evaluator parameter required");
      std::optional<ReviewScheme> scheme;
      if (req.has_param("scheme")) {
        scheme = parse_review_scheme(req.get_param_value("scheme"));
        if (!scheme) throw std::invalid_argument("unknown scheme " + req.get_param_value("scheme"));
      }
      auto task = svc.next_task(req.get_param_value("evaluator"), scheme);
      if (task) reply(res, 200, *task);
      else reply(res, 200, {{"task", nullptr}});
    });
  });

  srv.Post("/api/submissions", [&svc](const httplib::Request& req, httplib::Response& res) {
    guarded(res, [&] {
      json body;
      try {
        body = json::parse(req.body);
      } catch (const json::exception& e) {
        throw ReviewError(ReviewError::Kind::invalid, std::string("body: ") + e.what());
      }
      reply(res, 200, svc.submit(body));
    });
  });

  srv.Get("/api/progress", [&svc](const httplib::Request& req, httplib::Response& res) {
    guarded(res, [&] {
      if (!req.has_param("evaluator")) throw std::invalid_argument("evaluator parameter required");
      const auto p = svc.progress(req.get_param_value("evaluator"));
      json by = json::object();
      for (const auto& [s, v] : p.by_scheme) by[s] = {{"total", v.total}, {"done", v.done}};
      reply(res, 200, {{"evaluator_id", p.evaluator_id}, {"total", p.total}, {"done", p.done}, {"by_scheme", by}});
    });
  });

  if (ui_dir && !srv.set_mount_point("/", ui_dir->string())) {
    throw ReviewError(ReviewError::Kind::io, "cannot serve " + ui_dir->string());
  }
}

ReviewServer::~ReviewServer() { stop(); }

int ReviewServer::bind(const std::string& host, int port) {
  if (port == 0) return impl_->server.bind_to_any_port(host);
  return impl_->server.bind_to_port(host, port) ? port : -1;
}

bool ReviewServer::listen_after_bind() { return impl_->server.listen_after_bind(); }

void ReviewServer::stop() {
  if (impl_) impl_->server.stop();
}

void ReviewServer::wait_until_ready() const {
  while (!impl_->server.is_running()) std::this_thread::sleep_for(std::chrono::milliseconds(1));
}

}  // namespace liteval
