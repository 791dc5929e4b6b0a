#include <doctest.h>

#include <algorithm>
#include <random>

#include "liteval/agreement.hpp"
#include "oracles.hpp"

using namespace liteval;

namespace {

const std::filesystem::path kFixture = LITEVAL_FIXTURE_DIR "/corpus";

bool degenerate(const std::vector<double>& v) {
  return std::all_of(v.begin(), v.end(), [&](double x) { return x == v.front(); });
}

ErrorSpan span(std::size_t s, std::size_t e, MajorCategory m, Severity sev) {
  return {s, e, {m, std::nullopt}, sev, std::nullopt};
}

}  // namespace

TEST_CASE("kendall_tau_b examples") {
  const std::vector<double> a{1, 2, 3, 4}, rev{4, 3, 2, 1}, y{1, 3, 2, 4};
  CHECK(kendall_tau_b(a, a) == doctest::Approx(1.0));
  CHECK(kendall_tau_b(a, rev) == doctest::Approx(-1.0));
  CHECK(kendall_tau_b(a, y) == doctest::Approx(4.0 / 6.0));
  const std::vector<double> flat{2, 2, 2, 2};
  CHECK_THROWS_AS(kendall_tau_b(a, flat), AgreementError);
  const std::vector<double> one{1};
  CHECK_THROWS_AS(kendall_tau_b(one, one), AgreementError);
  const std::vector<double> three{1, 2, 3};
  CHECK_THROWS_AS(kendall_tau_b(a, three), AgreementError);
}

TEST_CASE("spearman_rho examples") {
  const std::vector<double> a{1, 2, 3}, rev{3, 2, 1}, y{1, 3, 2};
  CHECK(spearman_rho(a, a) == doctest::Approx(1.0));
  CHECK(spearman_rho(a, rev) == doctest::Approx(-1.0));
  CHECK(spearman_rho(a, y) == doctest::Approx(0.5));
  const std::vector<double> tied{1, 2, 2, 5};
  CHECK(average_ranks(tied) == std::vector<double>{1, 2.5, 2.5, 4});
}

TEST_CASE("cohen_kappa examples") {
  const std::vector<std::string> a{"A", "A", "B", "B"}, b{"A", "B", "A", "B"};
  CHECK(cohen_kappa(a, a) == doctest::Approx(1.0));
  CHECK(cohen_kappa(a, b) == doctest::Approx(0.0));
  const std::vector<std::string> x(5, "X"), y(5, "Y");
  CHECK(cohen_kappa(x, y) <= 0.0);
  CHECK(cohen_kappa(x, x) == 1.0);
}

TEST_CASE("statistics match brute-force oracles on random small inputs") {
  std::mt19937_64 rng(20240601);
  std::uniform_int_distribution<int> size(2, 6), value(0, 4), label(0, 2);
  int compared = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const int n = size(rng);
    std::vector<double> x(n), y(n);
    std::vector<int> la(n), lb(n);
    for (int i = 0; i < n; ++i) {
      x[i] = value(rng);
      y[i] = value(rng);
      la[i] = label(rng);
      lb[i] = label(rng);
    }
    CHECK(std::abs(cohen_kappa(la, lb) - oracle::cohen_kappa(la, lb)) <= 1e-12);
    if (degenerate(x) || degenerate(y)) {
      CHECK_THROWS_AS(kendall_tau_b(x, y), AgreementError);
      continue;
    }
    ++compared;
    CHECK(std::abs(kendall_tau_b(x, y) - oracle::kendall_tau_b(x, y)) <= 1e-12);
    CHECK(std::abs(spearman_rho(x, y) - oracle::spearman(x, y)) <= 1e-12);
    CHECK(std::abs(pearson_r(x, y) - oracle::pearson(x, y)) <= 1e-12);
  }
  CHECK(compared > 800);
}

TEST_CASE("kendall_tau_b agrees with the oracle on larger tied inputs") {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<int> value(0, 9);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> x(200), y(200);
    for (int i = 0; i < 200; ++i) {
      x[i] = value(rng);
      y[i] = x[i] + value(rng) - 4.5;
    }
    CHECK(std::abs(kendall_tau_b(x, y) - oracle::kendall_tau_b(x, y)) <= 1e-12);
  }
}

TEST_CASE("statistics are symmetric") {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> g;
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> x(12), y(12);
    for (int i = 0; i < 12; ++i) {
      x[i] = g(rng);
      y[i] = g(rng);
    }
    CHECK(kendall_tau_b(x, y) == doctest::Approx(kendall_tau_b(y, x)));
    CHECK(spearman_rho(x, y) == doctest::Approx(spearman_rho(y, x)));
  }
}

TEST_CASE("kappa of a random relabelling is near zero") {
  std::mt19937_64 rng(99);
  std::uniform_int_distribution<int> label(0, 3);
  double sum = 0;
  const int trials = 1000;
  for (int t = 0; t < trials; ++t) {
    std::vector<int> a(100);
    for (auto& v : a) v = label(rng);
    auto b = a;
    std::shuffle(b.begin(), b.end(), rng);
    sum += cohen_kappa(a, b);
  }
  CHECK(std::abs(sum / trials) < 0.1);
}

TEST_CASE("span unit labels") {
  MQMAnnotation none{"s", "e", {}};
  CHECK(span_unit_labels(3, none, SpanMode::binary) == std::vector<std::string>(3, "none"));

  MQMAnnotation one{"s", "e", {span(2, 5, MajorCategory::Accuracy, Severity::Major)}};
  CHECK(span_unit_labels(6, one, SpanMode::binary) ==
        std::vector<std::string>{"none", "none", "error", "error", "error", "none"});

  MQMAnnotation overlap{"s", "e",
                        {span(0, 4, MajorCategory::Style, Severity::Minor),
                         span(2, 6, MajorCategory::Accuracy, Severity::Major)}};
  const auto labels = span_unit_labels(6, overlap, SpanMode::category);
  CHECK(labels[1] == "Style");
  CHECK(labels[3] == "Accuracy");

  MQMAnnotation same_severity{"s", "e",
                              {span(0, 4, MajorCategory::Style, Severity::Minor),
                               span(2, 6, MajorCategory::Fluency, Severity::Minor)}};
  CHECK(span_unit_labels(6, same_severity, SpanMode::category)[3] == "Style");

  FreeAnnotation free{"s", "p", {{0, 2, Polarity::good, "g"}, {1, 3, Polarity::error, "e"}}};
  CHECK(span_unit_labels(4, free) == std::vector<std::string>{"none", "error", "error", "none"});
}

TEST_CASE("span match kappa") {
  const TranslationSegment seg{"s", "p", "x", "abcdefghij", 1, std::nullopt, std::nullopt};
  MQMAnnotation acc{"s", "a", {span(0, 5, MajorCategory::Accuracy, Severity::Major)}};
  MQMAnnotation sty{"s", "b", {span(0, 5, MajorCategory::Style, Severity::Major)}};
  MQMAnnotation empty{"s", "b", {}};
  MQMAnnotation first3{"s", "a", {span(0, 3, MajorCategory::Accuracy, Severity::Minor)}};

  CHECK(span_match_kappa(acc, acc, seg, SpanMode::category) == doctest::Approx(1.0));
  CHECK(span_match_kappa(first3, empty, seg, SpanMode::binary) <= 0.0);
  CHECK(span_match_kappa(acc, sty, seg, SpanMode::binary) == doctest::Approx(1.0));
  // p_o = 0.5, p_e = 0.25 over 10 characters.
  CHECK(span_match_kappa(acc, sty, seg, SpanMode::category) == doctest::Approx(1.0 / 3.0));
}

TEST_CASE("BWS agreement") {
  const std::vector<BWSJudgment> a{{"t", {"w", "x", "y", "z"}, "w", "z", "e1"}};
  CHECK(bws_agreement(a, a) == doctest::Approx(1.0));
  // Same best, different worst: labels (b,n,n,w) vs (b,n,w,n). p_o = 0.5,
  // p_e = 1/16 + 4/16 + 1/16.
  const std::vector<BWSJudgment> b{{"t", {"w", "x", "y", "z"}, "w", "y", "e2"}};
  CHECK(bws_agreement(a, b) == doctest::Approx(0.2));
  const std::vector<BWSJudgment> other{{"u", {"w", "x", "y", "z"}, "w", "y", "e2"}};
  CHECK_THROWS_AS(bws_agreement(a, other), AgreementError);
}

TEST_CASE("fixture agreement matches independent computation") {
  const auto corpus = load_corpus(kFixture);
  CHECK(agreement_pairs(corpus, AgreementScheme::mqm, EvaluatorRole::student) ==
        std::vector<std::pair<std::string, std::string>>{{"s1", "s2"}, {"s3", "s4"}});

  // scipy.stats.kendalltau and sklearn cohen_kappa_score on the fixture files.
  struct Expected {
    AgreementScheme scheme;
    SpanMode mode;
    double de_en;
    double en_zh;
  };
  const Expected cases[] = {
      {AgreementScheme::mqm, SpanMode::binary, 0.8403658068160179, 0.8666666666666666},
      {AgreementScheme::sqm, SpanMode::binary, 0.9088109773219402, 0.6},
      {AgreementScheme::bws, SpanMode::binary, 0.2857142857142857, 0.2857142857142857},
      {AgreementScheme::span, SpanMode::binary, 0.9565869436268201, 0.8836246550137994},
      {AgreementScheme::span, SpanMode::category, 0.8549483237797464, 0.8914163090128755},
  };
  for (const auto& c : cases) {
    const auto de = pairwise_agreement(corpus, "s1", "s2", c.scheme, c.mode);
    const auto zh = pairwise_agreement(corpus, "s3", "s4", c.scheme, c.mode);
    REQUIRE(de.size() == 1);
    REQUIRE(zh.size() == 1);
    CHECK(de[0].pair.key() == "de-en");
    CHECK(std::abs(de[0].value - c.de_en) <= 1e-12);
    CHECK(std::abs(zh[0].value - c.en_zh) <= 1e-12);

    const auto summary = agreement_summary(corpus, c.scheme, EvaluatorRole::student, c.mode);
    REQUIRE(summary.per_pair.size() == 2);
    CHECK(summary.mean == doctest::Approx((c.de_en + c.en_zh) / 2).epsilon(1e-12));
  }

  const auto cross = pairwise_agreement(corpus, "s1", "p1", AgreementScheme::free_span);
  REQUIRE(cross.size() == 1);
  CHECK(cross[0].n_items == 12);
  CHECK(cross[0].value >= -1.0);
  CHECK(cross[0].value <= 1.0);
  CHECK_THROWS_AS(pairwise_agreement(corpus, "s1", "ghost", AgreementScheme::mqm), AgreementError);
}
