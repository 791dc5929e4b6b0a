#pragma once
// Literalness and diversity statistics: subset-tree kernels over
// constituency parses, sentence-level BLEU, and pairwise lexical overlap.

#include <array>
#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "liteval/corpus_io.hpp"
#include "liteval/scoring.hpp"

namespace liteval {

struct ParseTree {
  std::string label;
  std::vector<ParseTree> children;  // empty for leaves (preterminals)

  bool is_leaf() const { return children.empty(); }
  std::size_t node_count() const;
  bool operator==(const ParseTree&) const = default;
};

class TreeParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Penn-Treebank bracketed text. Terminal tokens are dropped, so preterminals
// become leaves; an unlabeled outer bracket becomes "ROOT".
ParseTree parse_bracketed(std::string_view text);
std::string to_bracketed(const ParseTree& tree);

struct ParseTreeDoc {
  std::string segment_id;
  std::vector<ParseTree> trees;  // one per sentence
};

// One tree per non-blank line.
ParseTreeDoc load_tree_doc(const std::filesystem::path& file, std::string segment_id);
// trees/<id>.txt for every paragraph and segment id that has a file.
std::map<std::string, ParseTreeDoc> load_tree_dir(const std::filesystem::path& dir);

inline constexpr double kDefaultLambda = 0.4;

// Collins-Duffy subset-tree kernel: sum over node pairs of the decayed count
// of shared fragments rooted at both.
double tree_kernel(const ParseTree& a, const ParseTree& b, double lambda = kDefaultLambda);

// K(a,b) / sqrt(K(a,a) K(b,b)), in [0, 1].
double normalized_kernel(const ParseTree& a, const ParseTree& b, double lambda = kDefaultLambda);

// Mean best-match normalized kernel, averaged over both directions.
double doc_syntactic_similarity(const ParseTreeDoc& source, const ParseTreeDoc& target,
                                double lambda = kDefaultLambda);

enum class BleuTokenizer { intl_13a, char_cjk };

BleuTokenizer tokenizer_for(std::string_view language);
std::vector<std::string> tokenize(std::string_view text, BleuTokenizer tokenizer);

struct BleuResult {
  double score = 0.0;  // 0..100
  std::array<double, 4> precisions{};  // percent
  std::array<std::size_t, 4> correct{};
  std::array<std::size_t, 4> total{};
  double brevity_penalty = 1.0;
  std::size_t hyp_len = 0;
  std::size_t ref_len = 0;
};

// Sentence-level BLEU: case-sensitive, up to 4-grams, exponential smoothing
// of zero-match orders, effective order for short hypotheses.
BleuResult bleu_stats(const std::vector<std::string>& hyp_tokens,
                      const std::vector<std::string>& ref_tokens);
double bleu(std::string_view hypothesis, std::string_view reference,
            BleuTokenizer tokenizer = BleuTokenizer::intl_13a);

struct OverlapMatrix {
  std::vector<std::string> systems;
  std::vector<std::vector<double>> values;  // row = hypothesis system
};

struct LexicalOverlap {
  std::map<std::string, double> mean;  // system -> Avg.overlap
  OverlapMatrix matrix;
};

struct OverlapOptions {
  std::optional<LanguagePair> pair;  // restrict to one pair
  std::optional<Era> era;
};

// For each paragraph shared by at least two systems: BLEU of one system's
// translation (hypothesis) against each other system's (reference),
// averaged over the others, then over paragraphs. Several versions of one
// system are averaged.
LexicalOverlap pairwise_lexical_overlap(const Corpus& corpus, const OverlapOptions& options = {});

struct LiteralnessRow {
  std::string system_id;
  double human_mqm = 0.0;
  double syntactic_similarity = 0.0;
  double lexical_overlap = 0.0;
  std::optional<double> judge_score;
  int rank_human = 0;
  int rank_judge = 0;  // 0 when no judge scores
};

struct LiteralnessOptions {
  double lambda = kDefaultLambda;
  std::optional<Era> era;
};

// Per-system table behind the literalness scatter plot. Every system with a
// human score must also have trees and overlap; std::invalid_argument
// otherwise.
std::vector<LiteralnessRow> literalness_report(const Corpus& corpus,
                                               const std::map<std::string, ParseTreeDoc>& trees,
                                               const SegmentScores& human_scores,
                                               const SegmentScores& judge_scores,
                                               const LiteralnessOptions& options = {});

// Mean source-vs-segment syntactic similarity per system.
std::map<std::string, double> system_syntactic_similarity(
    const Corpus& corpus, const std::map<std::string, ParseTreeDoc>& trees, double lambda,
    std::optional<Era> era = std::nullopt);

}  // namespace liteval
