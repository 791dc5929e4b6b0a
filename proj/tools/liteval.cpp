#include <csignal>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "liteval/adequacy.hpp"
#include "liteval/agreement.hpp"
#include "liteval/corpus_io.hpp"
#include "liteval/llm_judge.hpp"
#include "liteval/review_service.hpp"
#include "liteval/scoring.hpp"
#include "liteval/textstats.hpp"

using namespace liteval;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  for (std::string item; std::getline(ss, item, sep);) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::string fmt(double v, int precision = 3) {
  if (std::isnan(v)) return "nan";
  std::ostringstream os;
  os << std::fixed << std::setprecision(precision) << v;
  return os.str();
}

void print_warnings(const Warnings& warnings) {
  for (const auto& w : warnings) std::cerr << "warning: " << w << '\n';
}

// Rows of cells, rendered as an aligned table, CSV, or a JSON array of objects.
struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  void print(std::ostream& os, const std::string& format) const {
    if (format == "csv") {
      auto line = [&](const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) os << (i ? "," : "") << cells[i];
        os << '\n';
      };
      line(header);
      for (const auto& r : rows) line(r);
    } else if (format == "json") {
      json arr = json::array();
      for (const auto& r : rows) {
        json obj;
        for (std::size_t i = 0; i < header.size(); ++i) obj[header[i]] = r[i];
        arr.push_back(std::move(obj));
      }
      os << arr.dump(2) << '\n';
    } else {
      std::vector<std::size_t> width(header.size());
      for (std::size_t i = 0; i < header.size(); ++i) width[i] = header[i].size();
      for (const auto& r : rows) {
        for (std::size_t i = 0; i < r.size(); ++i) width[i] = std::max(width[i], r[i].size());
      }
      auto line = [&](const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
          os << (i ? "  " : "") << std::left << std::setw(static_cast<int>(width[i])) << cells[i];
        }
        os << '\n';
      };
      line(header);
      for (const auto& r : rows) line(r);
    }
  }

  void write_csv(const fs::path& path) const {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    print(out, "csv");
  }
};

std::optional<EvaluatorRole> role_option(const std::string& s) {
  if (s.empty() || s == "any") return std::nullopt;
  auto r = parse_role(s);
  if (!r) throw CLI::ValidationError("--evaluator-role", "expected student|professional|any");
  return r;
}

std::optional<Era> era_option(const std::string& s) {
  if (s.empty() || s == "any") return std::nullopt;
  auto e = parse_era(s);
  if (!e) throw CLI::ValidationError("--era", "expected classic|contemporary|any");
  return e;
}

std::optional<LanguagePair> pair_option(const std::string& s) {
  if (s.empty()) return std::nullopt;
  return LanguagePair::parse(s);
}

// ---------------------------------------------------------------- stats

struct StatsArgs {
  std::string dir, pair, format = "table";
};

void run_stats(const StatsArgs& a) {
  const auto corpus = load_corpus(a.dir);
  const auto stats = corpus_stats(corpus);
  Table t{{"pair", "paragraphs", "segments", "sentences", "src_sent_per_par", "tgt_sent_per_seg"}, {}};
  auto add = [&](const PairStats& p) {
    t.rows.push_back({p.pair, std::to_string(p.paragraph_count), std::to_string(p.segment_count),
                      std::to_string(p.sentence_count), fmt(p.mean_source_sentences, 1),
                      fmt(p.mean_target_sentences, 1)});
  };
  const auto want = pair_option(a.pair);
  for (const auto& p : stats.pairs) {
    if (!want || p.pair == want->key()) add(p);
  }
  if (!want) add(stats.total);
  if (want && t.rows.empty()) throw std::runtime_error("no data for pair " + a.pair);
  t.print(std::cout, a.format);
}

// ---------------------------------------------------------------- score

struct ScoreArgs {
  std::string dir, scheme = "mqm", weights = "25,5,1", out, role, pair, format = "table";
  double alpha = 0.5;
};

void run_score(const ScoreArgs& a) {
  const auto corpus = load_corpus(a.dir);
  const auto weights = SeverityWeights::parse(a.weights);
  JudgmentFilter filter;
  filter.role = role_option(a.role);
  filter.pair = pair_option(a.pair);
  Warnings warnings;
  SegmentScores scores;
  if (a.scheme == "mqm") scores = segment_mqm_scores(corpus, weights, filter);
  else if (a.scheme == "sqm") scores = segment_sqm_scores(corpus, filter);
  else if (a.scheme == "free") scores = segment_free_scores(corpus, filter);
  else scores = segment_combined_scores(corpus, a.alpha, weights, filter, &warnings);

  if (!a.out.empty()) {
    Table seg{{"segment_id", "system_id", "pair", "score"}, {}};
    for (const auto& [id, s] : scores) {
      const auto& segment = corpus.segment(id);
      seg.rows.push_back({id, segment.system_id, corpus.pair_of(id).key(), fmt(s, 6)});
    }
    seg.write_csv(a.out);
  }
  const auto ranking = system_ranking(scores, corpus, a.scheme, {}, &warnings);
  print_warnings(warnings);
  Table t{{"rank", "system", "mean", "segments"}, {}};
  for (const auto& e : ranking.entries) {
    const auto it = corpus.systems.find(e.system_id);
    const auto& name = it != corpus.systems.end() && !it->second.display_name.empty()
                           ? it->second.display_name
                           : e.system_id;
    t.rows.push_back({std::to_string(e.rank), name, fmt(e.mean_score, 3), std::to_string(e.n_segments)});
  }
  t.print(std::cout, a.format);
}

// ---------------------------------------------------------------- agree

struct AgreeArgs {
  std::string dir, evaluators, scheme = "mqm", mode = "binary", role = "student", weights = "25,5,1",
                                   format = "table";
};

void run_agree(const AgreeArgs& a) {
  const auto corpus = load_corpus(a.dir);
  static const std::map<std::string, AgreementScheme> schemes = {
      {"mqm", AgreementScheme::mqm},   {"sqm", AgreementScheme::sqm},
      {"bws", AgreementScheme::bws},   {"span", AgreementScheme::span},
      {"free_span", AgreementScheme::free_span}};
  const auto scheme = schemes.at(a.scheme);
  const auto mode = a.mode == "category" ? SpanMode::category : SpanMode::binary;
  const auto weights = SeverityWeights::parse(a.weights);

  Table t{{"pair", "statistic", "value", "items"}, {}};
  if (!a.evaluators.empty()) {
    const auto ids = split(a.evaluators, ',');
    if (ids.size() != 2) throw CLI::ValidationError("--evaluators", "expected two ids, e.g. s1,s2");
    for (const auto& r : pairwise_agreement(corpus, ids[0], ids[1], scheme, mode, weights)) {
      t.rows.push_back({r.pair.key(), r.statistic, fmt(r.value), std::to_string(r.n_items)});
    }
  } else {
    const auto role = role_option(a.role).value_or(EvaluatorRole::student);
    const auto summary = agreement_summary(corpus, scheme, role, mode, weights);
    print_warnings(summary.warnings);
    for (const auto& r : summary.per_pair) {
      t.rows.push_back({r.pair.key(), r.statistic, fmt(r.value), std::to_string(r.n_items)});
    }
    if (!summary.per_pair.empty()) {
      t.rows.push_back({"mean", summary.per_pair.front().statistic, fmt(summary.mean), ""});
    }
  }
  t.print(std::cout, a.format);
}

// ---------------------------------------------------------------- adequacy

struct AdequacyArgs {
  std::string dir, scheme = "all", role, scenario, mode = "joint", weights = "25,5,1", metrics, out,
                   format = "table";
};

void run_adequacy(const AdequacyArgs& a) {
  const auto corpus = load_corpus(a.dir);
  AdequacyOptions opt;
  opt.weights = SeverityWeights::parse(a.weights);
  opt.mode = a.mode == "pairwise" ? PreferenceMode::pairwise : PreferenceMode::joint_strict;
  if (!a.metrics.empty()) {
    auto imported = import_metric_scores(fs::path(a.metrics), corpus);
    print_warnings(imported.warnings);
    for (auto& [metric, scores] : by_metric(imported.scores)) opt.metrics[metric] = scores;
  }
  const auto role = role_option(a.role);
  std::optional<Scenario> scenario;
  if (a.scenario == "top") scenario = Scenario::vs_top_systems;
  else if (a.scenario == "other") scenario = Scenario::vs_other_systems;

  Table t{{"scheme", "source", "scenario", "pair", "percent", "paragraphs", "preferred", "comparisons"}, {}};
  for (const auto& row : adequacy_matrix(corpus, opt)) {
    if (a.scheme != "all" && row.scheme != a.scheme) continue;
    if (role && row.source != to_string(*role)) continue;
    if (scenario && row.scenario != *scenario) continue;
    for (const auto& r : row.per_pair) {
      t.rows.push_back({row.scheme, row.source, std::string(to_string(row.scenario)), r.pair,
                        fmt(r.percentage, 1), std::to_string(r.n_paragraphs), std::to_string(r.preferred),
                        std::to_string(r.comparisons)});
    }
  }
  if (!a.out.empty()) t.write_csv(a.out);
  t.print(std::cout, a.format);
}

// ---------------------------------------------------------------- judge

struct JudgeArgs {
  std::string dir, tmpl = "literary", temperatures, cache, config, endpoint, model, pair, segments,
                   out = "judge_runs.jsonl", audit;
  int queries = 0, limit = 0, parallelism = 0;
};

void run_judge_cmd(const JudgeArgs& a) {
  const auto corpus = load_corpus(a.dir);
  JudgeConfig cfg;
  if (!a.config.empty()) cfg = load_judge_config(a.config);
  if (!a.endpoint.empty()) cfg.endpoint = a.endpoint;
  if (!a.model.empty()) cfg.model = a.model;
  if (a.queries > 0) cfg.n_queries = a.queries;
  if (a.parallelism > 0) cfg.parallelism = a.parallelism;
  if (!a.temperatures.empty()) {
    cfg.temperatures.clear();
    for (const auto& t : split(a.temperatures, ',')) cfg.temperatures.push_back(std::stod(t));
  }
  const auto tmpl = parse_template_id(a.tmpl);
  if (!tmpl) throw CLI::ValidationError("--template", "expected literary|original|rubric");
  const char* key = std::getenv(kApiKeyEnv);
  if (!key || !*key) throw std::runtime_error(std::string("set ") + kApiKeyEnv + " to the judge API key");

  std::vector<std::string> ids;
  if (!a.segments.empty()) {
    std::ifstream in(a.segments);
    if (!in) throw std::runtime_error("cannot open " + a.segments);
    for (std::string line; std::getline(in, line);) {
      if (!line.empty()) ids.push_back(line);
    }
  } else {
    const auto want = pair_option(a.pair);
    for (const auto& [id, seg] : corpus.segments) {
      if (!want || corpus.pair_of(id) == *want) ids.push_back(id);
    }
  }
  if (a.limit > 0 && ids.size() > static_cast<std::size_t>(a.limit)) ids.resize(a.limit);

  HttpChatClient client(cfg.endpoint, key);
  JudgeOptions opt;
  opt.model = cfg.model;
  opt.parallelism = cfg.parallelism;
  if (!a.cache.empty()) opt.cache_dir = a.cache;
  opt.audit_log = a.audit.empty() ? fs::path(a.out).replace_extension(".audit.jsonl") : fs::path(a.audit);

  const auto inputs = judge_inputs(corpus, ids);
  std::vector<JudgeRun> all;
  for (double temp : cfg.temperatures) {
    auto runs = run_judge(client, inputs, *tmpl, temp, cfg.n_queries, opt);
    all.insert(all.end(), runs.begin(), runs.end());
  }
  save_judge_runs(all, a.out);

  std::size_t parsed = 0, failed = 0;
  for (const auto& r : all) {
    parsed += r.parse_ok;
    failed += r.failed;
  }
  std::cout << "runs " << all.size() << ", parsed " << parsed << ", failed " << failed << " -> " << a.out
            << '\n';
  if (cfg.n_queries >= 2) {
    Table t{{"temperature", "mean_spearman", "pct_d<=1", "pct_1<d<=5", "pct_d>5"}, {}};
    for (const auto& r : consistency_analysis(all)) {
      t.rows.push_back({fmt(r.temperature, 2), fmt(r.mean_spearman), fmt(r.pct_delta_le_1, 1),
                        fmt(r.pct_delta_1_5, 1), fmt(r.pct_delta_gt_5, 1)});
    }
    t.print(std::cout, "table");
  }
  const auto human = segment_mqm_scores(corpus);
  const auto judge = judge_segment_scores(all);
  try {
    Table t{{"pair", "tau_b_vs_mqm", "segments"}, {}};
    for (const auto& r : segment_correlation_by_pair(corpus, judge, human)) {
      t.rows.push_back({r.pair, fmt(r.tau), std::to_string(r.n)});
    }
    t.print(std::cout, "table");
  } catch (const std::exception& e) {
    std::cerr << "warning: no correlation with human MQM: " << e.what() << '\n';
  }
}

// ---------------------------------------------------------------- diversity

struct DiversityArgs {
  std::string dir, trees, pair, era, out, format = "table";
  double lambda = kDefaultLambda;
};

void run_diversity(const DiversityArgs& a) {
  const auto corpus = load_corpus(a.dir);
  OverlapOptions opt;
  opt.pair = pair_option(a.pair);
  opt.era = era_option(a.era);
  const auto overlap = pairwise_lexical_overlap(corpus, opt);

  if (!a.out.empty()) {
    Table m;
    m.header.push_back("system");
    for (const auto& s : overlap.matrix.systems) m.header.push_back(s);
    for (std::size_t i = 0; i < overlap.matrix.systems.size(); ++i) {
      std::vector<std::string> row{overlap.matrix.systems[i]};
      for (double v : overlap.matrix.values[i]) row.push_back(fmt(v, 2));
      m.rows.push_back(std::move(row));
    }
    m.write_csv(a.out);
  }
  std::map<std::string, double> syntax;
  if (!a.trees.empty()) {
    syntax = system_syntactic_similarity(corpus, load_tree_dir(a.trees), a.lambda, opt.era);
  }
  Table t{{"system", "avg_overlap", "syntactic_similarity"}, {}};
  for (const auto& [sys, v] : overlap.mean) {
    const auto it = syntax.find(sys);
    t.rows.push_back({sys, fmt(v, 2), it == syntax.end() ? "" : fmt(it->second, 4)});
  }
  t.print(std::cout, a.format);
}

// ---------------------------------------------------------------- literalness

struct LiteralnessArgs {
  std::string dir, trees, era, judge, out, format = "table";
  double lambda = kDefaultLambda;
};

void run_literalness(const LiteralnessArgs& a) {
  const auto corpus = load_corpus(a.dir);
  LiteralnessOptions opt;
  opt.lambda = a.lambda;
  opt.era = era_option(a.era);
  SegmentScores judge;
  if (!a.judge.empty()) judge = judge_segment_scores(load_judge_runs(a.judge));
  const auto rows = literalness_report(corpus, load_tree_dir(a.trees), segment_mqm_scores(corpus), judge, opt);
  Table t{{"system", "human_mqm", "syntactic_similarity", "lexical_overlap", "judge_score", "rank_human",
           "rank_judge"},
          {}};
  for (const auto& r : rows) {
    t.rows.push_back({r.system_id, fmt(r.human_mqm), fmt(r.syntactic_similarity, 4), fmt(r.lexical_overlap, 2),
                      r.judge_score ? fmt(*r.judge_score) : "", std::to_string(r.rank_human),
                      r.rank_judge ? std::to_string(r.rank_judge) : ""});
  }
  if (!a.out.empty()) t.write_csv(a.out);
  t.print(std::cout, a.format);
}

// ---------------------------------------------------------------- serve / export

struct ServeArgs {
  std::string dir, tasks, journal = "journal.jsonl", ui, host = "127.0.0.1", out;
  int port = 8080;
};

ReviewServer* g_server = nullptr;

void on_signal(int) {
  if (g_server) g_server->stop();
}

void run_serve(const ServeArgs& a) {
  auto corpus = load_corpus(a.dir);
  auto tasks = load_tasks(a.tasks, corpus);
  ReviewService service(std::move(corpus), std::move(tasks), a.journal);
  for (const auto& w : service.replay_warnings()) std::cerr << "warning: " << w << '\n';
  std::optional<fs::path> ui;
  if (!a.ui.empty()) ui = a.ui;
  ReviewServer server(service, ui);
  const int port = server.bind(a.host, a.port);
  if (port < 0) throw std::runtime_error("cannot bind " + a.host + ":" + std::to_string(a.port));
  g_server = &server;
  std::signal(SIGINT, on_signal);
  std::signal(SIGTERM, on_signal);
  std::cout << "serving " << service.tasks().size() << " tasks on http://" << a.host << ":" << port << std::endl;
  server.listen_after_bind();
  g_server = nullptr;
}

void run_export(const ServeArgs& a) {
  auto corpus = load_corpus(a.dir);
  auto tasks = load_tasks(a.tasks, corpus);
  ReviewService service(std::move(corpus), std::move(tasks), a.journal);
  for (const auto& w : service.replay_warnings()) std::cerr << "warning: " << w << '\n';
  fs::create_directories(a.out);
  service.export_judgments(a.out);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"liteval: literary translation evaluation toolkit"};
  app.require_subcommand(1);
  const auto formats = CLI::IsMember({"table", "csv", "json"});

  StatsArgs stats;
  auto* s = app.add_subcommand("stats", "Corpus statistics per language pair");
  s->add_option("corpus-dir", stats.dir)->required()->check(CLI::ExistingDirectory);
  s->add_option("--pair", stats.pair, "Restrict to one pair, e.g. de-en");
  s->add_option("--format", stats.format)->check(formats);
  s->callback([&] { run_stats(stats); });

  ScoreArgs score;
  auto* sc = app.add_subcommand("score", "Segment scores and system ranking");
  sc->add_option("corpus-dir", score.dir)->required()->check(CLI::ExistingDirectory);
  sc->add_option("--scheme", score.scheme)->check(CLI::IsMember({"mqm", "sqm", "combined", "free"}));
  sc->add_option("--alpha", score.alpha, "SQM weight of the combined score")->check(CLI::Range(0.0, 1.0));
  sc->add_option("--weights", score.weights, "Non-translation,major,minor");
  sc->add_option("--evaluator-role", score.role, "student|professional|any");
  sc->add_option("--pair", score.pair);
  sc->add_option("--out", score.out, "Per-segment CSV");
  sc->add_option("--format", score.format)->check(formats);
  sc->callback([&] { run_score(score); });

  AgreeArgs agree;
  auto* ag = app.add_subcommand("agree", "Inter-annotator agreement");
  ag->add_option("corpus-dir", agree.dir)->required()->check(CLI::ExistingDirectory);
  ag->add_option("--evaluators", agree.evaluators, "Two evaluator ids; default: all pairs of --role");
  ag->add_option("--scheme", agree.scheme)->check(CLI::IsMember({"mqm", "sqm", "bws", "span", "free_span"}));
  ag->add_option("--mode", agree.mode)->check(CLI::IsMember({"binary", "category"}));
  ag->add_option("--role", agree.role, "student|professional");
  ag->add_option("--weights", agree.weights);
  ag->add_option("--format", agree.format)->check(formats);
  ag->callback([&] { run_agree(agree); });

  AdequacyArgs adequacy;
  auto* ad = app.add_subcommand("adequacy", "Human-vs-machine preference rates");
  ad->add_option("corpus-dir", adequacy.dir)->required()->check(CLI::ExistingDirectory);
  ad->add_option("--scheme", adequacy.scheme, "mqm|sqm|bws|free|<metric>|all");
  ad->add_option("--evaluator-role", adequacy.role, "student|professional|any");
  ad->add_option("--scenario", adequacy.scenario)->check(CLI::IsMember({"top", "other"}));
  ad->add_option("--mode", adequacy.mode)->check(CLI::IsMember({"joint", "pairwise"}));
  ad->add_option("--weights", adequacy.weights);
  ad->add_option("--metrics", adequacy.metrics, "Metric score CSV")->check(CLI::ExistingFile);
  ad->add_option("--out", adequacy.out);
  ad->add_option("--format", adequacy.format)->check(formats);
  ad->callback([&] { run_adequacy(adequacy); });

  JudgeArgs judge;
  auto* j = app.add_subcommand("judge", "Query an LLM judge");
  j->add_option("corpus-dir", judge.dir)->required()->check(CLI::ExistingDirectory);
  j->add_option("--template", judge.tmpl)->check(CLI::IsMember({"literary", "original", "rubric"}));
  j->add_option("--temperatures", judge.temperatures, "Comma-separated, e.g. 0,0.1,0.3");
  j->add_option("--queries", judge.queries, "Queries per segment and temperature");
  j->add_option("--cache", judge.cache, "Response cache directory");
  j->add_option("--config", judge.config, "JSON with endpoint, model, temperatures, n_queries")
      ->check(CLI::ExistingFile);
  j->add_option("--endpoint", judge.endpoint);
  j->add_option("--model", judge.model);
  j->add_option("--pair", judge.pair);
  j->add_option("--segments", judge.segments, "File with one segment id per line")->check(CLI::ExistingFile);
  j->add_option("--limit", judge.limit);
  j->add_option("--parallelism", judge.parallelism);
  j->add_option("--out", judge.out, "Runs JSONL");
  j->add_option("--audit", judge.audit, "Raw response log");
  j->callback([&] { run_judge_cmd(judge); });

  DiversityArgs diversity;
  auto* dv = app.add_subcommand("diversity", "Lexical overlap and syntactic similarity");
  dv->add_option("corpus-dir", diversity.dir)->required()->check(CLI::ExistingDirectory);
  dv->add_option("--trees", diversity.trees, "Directory of <id>.txt parse trees")->check(CLI::ExistingDirectory);
  dv->add_option("--lambda", diversity.lambda)->check(CLI::Range(0.0, 1.0));
  dv->add_option("--pair", diversity.pair);
  dv->add_option("--era", diversity.era, "classic|contemporary|any");
  dv->add_option("--out", diversity.out, "Overlap matrix CSV");
  dv->add_option("--format", diversity.format)->check(formats);
  dv->callback([&] { run_diversity(diversity); });

  LiteralnessArgs literal;
  auto* li = app.add_subcommand("literalness", "Per-system literalness report");
  li->add_option("corpus-dir", literal.dir)->required()->check(CLI::ExistingDirectory);
  li->add_option("--trees", literal.trees)->required()->check(CLI::ExistingDirectory);
  li->add_option("--lambda", literal.lambda)->check(CLI::Range(0.0, 1.0));
  li->add_option("--era", literal.era, "classic|contemporary|any");
  li->add_option("--judge", literal.judge, "Runs JSONL from `liteval judge`")->check(CLI::ExistingFile);
  li->add_option("--out", literal.out);
  li->add_option("--format", literal.format)->check(formats);
  li->callback([&] { run_literalness(literal); });

  ServeArgs serve;
  auto* sv = app.add_subcommand("serve", "Run the annotation task service");
  sv->add_option("corpus-dir", serve.dir)->required()->check(CLI::ExistingDirectory);
  sv->add_option("--tasks", serve.tasks)->required()->check(CLI::ExistingFile);
  sv->add_option("--journal", serve.journal);
  sv->add_option("--port", serve.port);
  sv->add_option("--host", serve.host);
  sv->add_option("--ui", serve.ui, "Static UI bundle")->check(CLI::ExistingDirectory);
  sv->callback([&] { run_serve(serve); });

  ServeArgs exp;
  auto* ex = app.add_subcommand("export", "Write collected judgments as corpus JSONL");
  ex->add_option("corpus-dir", exp.dir)->required()->check(CLI::ExistingDirectory);
  ex->add_option("--tasks", exp.tasks)->required()->check(CLI::ExistingFile);
  ex->add_option("--journal", exp.journal)->required()->check(CLI::ExistingFile);
  ex->add_option("--out", exp.out)->required();
  ex->callback([&] { run_export(exp); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const CorpusError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
