#include <benchmark/benchmark.h>

#include <random>

#include "liteval/agreement.hpp"
#include "liteval/corpus_io.hpp"
#include "liteval/scoring.hpp"
#include "liteval/textstats.hpp"
#include "oracles.hpp"

using namespace liteval;

namespace {

// Right-branching sentence-like tree with roughly `n` nodes.
ParseTree chain_tree(int n, std::mt19937_64& rng) {
  static const char* const phrases[] = {"NP", "VP", "PP", "SBAR"};
  static const char* const tags[] = {"DT", "NN", "VB", "IN", "JJ"};
  ParseTree leaf{tags[rng() % 5], {}};
  ParseTree t{phrases[rng() % 4], {leaf}};
  for (int i = 2; i < n; i += 2) {
    ParseTree parent{phrases[rng() % 4], {ParseTree{tags[rng() % 5], {}}, std::move(t)}};
    t = std::move(parent);
  }
  return ParseTree{"ROOT", {ParseTree{"S", {std::move(t)}}}};
}

void BM_TreeKernel(benchmark::State& state) {
  std::mt19937_64 rng(1);
  const auto a = chain_tree(static_cast<int>(state.range(0)), rng);
  const auto b = chain_tree(static_cast<int>(state.range(0)), rng);
  for (auto _ : state) benchmark::DoNotOptimize(tree_kernel(a, b));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_TreeKernel)->RangeMultiplier(4)->Range(16, 1024)->Complexity();

void BM_Bleu(benchmark::State& state) {
  const std::string hyp =
      "One morning, as Gregor Samsa woke from troubled dreams, he found himself transformed in his bed "
      "into a monstrous insect. He lay on his armour-like back and saw his brown belly.";
  const std::string ref =
      "When Gregor Samsa woke up one morning from unsettling dreams, he found himself changed in his bed "
      "into a monstrous vermin. He was lying on his hard, as it were armor-plated, back.";
  for (auto _ : state) benchmark::DoNotOptimize(bleu(hyp, ref));
}
BENCHMARK(BM_Bleu);

void BM_KendallTauB(benchmark::State& state) {
  std::mt19937_64 rng(2);
  std::uniform_int_distribution<int> v(0, 50);
  std::vector<double> x(state.range(0)), y(state.range(0));
  for (auto& e : x) e = v(rng);
  for (auto& e : y) e = v(rng);
  for (auto _ : state) benchmark::DoNotOptimize(kendall_tau_b(x, y));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_KendallTauB)->RangeMultiplier(8)->Range(64, 1 << 15)->Complexity(benchmark::oNLogN);

void BM_KendallOracle(benchmark::State& state) {
  std::mt19937_64 rng(2);
  std::uniform_int_distribution<int> v(0, 50);
  std::vector<double> x(state.range(0)), y(state.range(0));
  for (auto& e : x) e = v(rng);
  for (auto& e : y) e = v(rng);
  for (auto _ : state) benchmark::DoNotOptimize(oracle::kendall_tau_b(x, y));
}
BENCHMARK(BM_KendallOracle)->RangeMultiplier(8)->Range(64, 4096);

void BM_FixtureScoring(benchmark::State& state) {
  const auto corpus = load_corpus(LITEVAL_FIXTURE_DIR "/corpus");
  for (auto _ : state) {
    benchmark::DoNotOptimize(system_ranking(segment_mqm_scores(corpus), corpus, "mqm"));
  }
}
BENCHMARK(BM_FixtureScoring);

}  // namespace

BENCHMARK_MAIN();
