#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "lexaudit/analyze.hpp"
#include "lexaudit/errors.hpp"
#include "lexaudit/util.hpp"
#include "oracles.hpp"

using namespace lexaudit;

namespace {

// hand-assembled regression result: labels[0] is the intercept
OlsResult result_with(const std::vector<std::pair<std::string, double>>& word_ps,
                      const std::vector<std::string>& dropped = {}) {
  OlsResult result;
  result.column_labels.push_back(kInterceptLabel);
  result.p_values.push_back(0.5);
  result.dropped.push_back(false);
  for (const auto& [word, p] : word_ps) {
    result.column_labels.push_back(word);
    result.p_values.push_back(p);
    result.dropped.push_back(std::find(dropped.begin(), dropped.end(), word) != dropped.end());
  }
  result.coefficients.assign(result.column_labels.size(), 0.0);
  result.standard_errors.assign(result.column_labels.size(), 0.0);
  result.t_statistics.assign(result.column_labels.size(), 0.0);
  result.dropped_columns = dropped;
  result.rows = 10;
  result.retained = result.column_labels.size() - dropped.size();
  result.degrees_of_freedom = 5;
  return result;
}

}  // namespace

TEST_CASE("rank_words returns smallest and largest p lists") {
  const OlsResult result = result_with({{"a", 0.01}, {"b", 0.5}, {"c", 0.99}});
  const WordRanking ranking = rank_words(result, 1);
  CHECK(ranking.smallest == std::vector<RankedWord>{{"a", 0.01}});
  CHECK(ranking.largest == std::vector<RankedWord>{{"c", 0.99}});

  const WordRanking two = rank_words(result, 2);
  CHECK(two.smallest == std::vector<RankedWord>{{"a", 0.01}, {"b", 0.5}});
  CHECK(two.largest == std::vector<RankedWord>{{"c", 0.99}, {"b", 0.5}});
}

TEST_CASE("rank_words breaks ties lexicographically") {
  const OlsResult result = result_with({{"b", 0.5}, {"a", 0.5}});
  const WordRanking ranking = rank_words(result, 1);
  CHECK(ranking.smallest.front().word == "a");
  CHECK(ranking.largest.front().word == "a");
}

TEST_CASE("rank_words ignores the intercept and dropped words") {
  const OlsResult result = result_with({{"a", 0.2}, {"dup", 0.0}}, {"dup"});
  const WordRanking ranking = rank_words(result, 1);
  CHECK(ranking.smallest.front().word == "a");

  try {
    rank_words(result, 2);  // only one retained word
    FAIL("expected KTooLarge");
  } catch (const Error& err) {
    CHECK(err.code() == Errc::k_too_large);
  }
  CHECK_THROWS_AS(rank_words(result, 0), Error);
}

TEST_CASE("rank_words is deterministic across repeated runs") {
  const OlsResult result =
      result_with({{"a", 0.4}, {"b", 0.4}, {"c", 0.1}, {"d", 0.9}, {"e", 0.4}});
  const WordRanking first = rank_words(result, 3);
  for (int i = 0; i < 5; ++i) {
    const WordRanking again = rank_words(result, 3);
    CHECK(again.smallest == first.smallest);
    CHECK(again.largest == first.largest);
  }
}

TEST_CASE("spearman on monotone and hand-computed sequences") {
  CHECK(spearman(std::vector<double>{1, 2, 3}, std::vector<double>{10, 20, 30}) == 1.0);
  CHECK(spearman(std::vector<double>{1, 2, 3}, std::vector<double>{30, 20, 10}) == -1.0);
  CHECK(std::fabs(spearman(std::vector<double>{1, 2, 3, 4}, std::vector<double>{2, 1, 4, 3}) -
                  0.6) <= 1e-12);
}

TEST_CASE("spearman rejects degenerate inputs") {
  auto code_of = [](auto fn) {
    try {
      fn();
    } catch (const Error& err) {
      return err.code();
    }
    return Errc::io_error;
  };
  CHECK(code_of([] { spearman(std::vector<double>{1.0}, std::vector<double>{1.0}); }) ==
        Errc::degenerate_input);
  CHECK(code_of([] { spearman(std::vector<double>{1, 2}, std::vector<double>{1, 2, 3}); }) ==
        Errc::degenerate_input);
  CHECK(code_of([] { spearman(std::vector<double>{5, 5, 5}, std::vector<double>{1, 2, 3}); }) ==
        Errc::degenerate_input);
  CHECK(code_of([] { spearman(std::vector<double>{1, 2, 3}, std::vector<double>{7, 7, 7}); }) ==
        Errc::degenerate_input);
}

TEST_CASE("spearman matches the brute-force oracle on tied inputs") {
  std::mt19937_64 rng(71);
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t n = 3 + draw_below(rng, 30);
    std::vector<double> xs(n), ys(n);
    for (std::size_t i = 0; i < n; ++i) {
      xs[i] = static_cast<double>(draw_below(rng, 6));  // small range forces ties
      ys[i] = static_cast<double>(draw_below(rng, 6));
    }
    try {
      const double expected = oracles::spearman_bruteforce(xs, ys);
      CHECK(std::fabs(spearman(xs, ys) - expected) <= 1e-12);
    } catch (const std::runtime_error&) {
      CHECK_THROWS_AS(spearman(xs, ys), Error);  // both sides call it degenerate
    }
  }
}

TEST_CASE("spearman is invariant under strictly increasing transforms and symmetric") {
  std::mt19937_64 rng(73);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t n = 4 + draw_below(rng, 20);
    std::vector<double> xs(n), ys(n);
    for (std::size_t i = 0; i < n; ++i) {
      xs[i] = draw_unit(rng) * 10 - 5;
      ys[i] = draw_unit(rng) * 10 - 5;
    }
    const double rho = spearman(xs, ys);
    CHECK(std::fabs(spearman(ys, xs) - rho) <= 1e-12);

    std::vector<double> fx(n), gy(n);
    for (std::size_t i = 0; i < n; ++i) {
      fx[i] = std::exp(xs[i] * 0.3);        // strictly increasing
      gy[i] = ys[i] * 7.0 + 11.0;           // strictly increasing
    }
    CHECK(std::fabs(spearman(fx, gy) - rho) <= 1e-12);
    CHECK(rho >= -1.0);
    CHECK(rho <= 1.0);
  }
}

TEST_CASE("happiness_vs_p_correlation excludes zero-p words") {
  const Lexicon lex(
      {{"a", 2.0}, {"b", 4.0}, {"c", 6.0}, {"d", 8.0}, {"zero", 5.0}}, "fixture");

  // p ordering equals happiness ordering -> rho = 1
  const OlsResult aligned =
      result_with({{"a", 0.1}, {"b", 0.2}, {"c", 0.3}, {"d", 0.4}});
  const CorrelationSummary summary = happiness_vs_p_correlation(lex, aligned, 1e-300);
  CHECK(summary.rho == 1.0);
  CHECK(summary.n_words_used == 4);
  CHECK(summary.n_excluded_zero_p == 0);

  // a word with an exactly-zero p is removed and counted
  const OlsResult with_zero =
      result_with({{"a", 0.1}, {"b", 0.2}, {"c", 0.3}, {"zero", 0.0}});
  const CorrelationSummary filtered = happiness_vs_p_correlation(lex, with_zero, 1e-300);
  CHECK(filtered.n_words_used == 3);
  CHECK(filtered.n_excluded_zero_p == 1);

  // everything excluded -> degenerate
  const OlsResult all_zero = result_with({{"a", 0.0}, {"b", 0.0}});
  try {
    happiness_vs_p_correlation(lex, all_zero, 1e-300);
    FAIL("expected DegenerateInput");
  } catch (const Error& err) {
    CHECK(err.code() == Errc::degenerate_input);
  }
}

TEST_CASE("difference_curve sorts by difference with doc_id tie-break") {
  auto pair_of = [](const std::string& id, double h, double r) {
    return make_score_pair(id, h, r);
  };
  const std::vector<ScorePair> pairs{pair_of("p1", 0.7, 0.5), pair_of("p2", 0.4, 0.5),
                                     pair_of("p3", 0.5, 0.5)};
  const auto curve = difference_curve(pairs);
  REQUIRE(curve.size() == 3);
  CHECK(curve[0].doc_id == "p2");  // -0.1
  CHECK(curve[1].doc_id == "p3");  // 0.0
  CHECK(curve[2].doc_id == "p1");  // 0.2
  CHECK(curve[0].rank == 1);
  CHECK(curve[2].rank == 3);

  const std::vector<ScorePair> ties{pair_of("z", 0.5, 0.5), pair_of("a", 0.5, 0.5),
                                    pair_of("m", 0.5, 0.5)};
  const auto tied_curve = difference_curve(ties);
  CHECK(tied_curve[0].doc_id == "a");
  CHECK(tied_curve[1].doc_id == "m");
  CHECK(tied_curve[2].doc_id == "z");

  CHECK_THROWS_AS(difference_curve(std::vector<ScorePair>{}), Error);
}

TEST_CASE("difference_curve five-pair fixture matches the hand-sorted order") {
  const std::vector<ScorePair> pairs{
      make_score_pair("a", 0.9, 0.1),   // 0.8
      make_score_pair("b", 0.1, 0.9),   // -0.8
      make_score_pair("c", 0.5, 0.5),   // 0.0
      make_score_pair("d", 0.6, 0.35),  // 0.25
      make_score_pair("e", 0.2, 0.4),   // -0.2
  };
  const auto curve = difference_curve(pairs);
  std::vector<std::string> ids;
  for (const auto& point : curve) ids.push_back(point.doc_id);
  CHECK(ids == std::vector<std::string>{"b", "e", "c", "d", "a"});
  for (std::size_t i = 1; i < curve.size(); ++i) {
    CHECK(curve[i].difference >= curve[i - 1].difference);  // non-decreasing
  }
  CHECK(curve.size() == pairs.size());
}

TEST_CASE("report serialization stays deterministic") {
  AuditReport report;
  report.domain = "news";
  report.smallest_p = {{"bad", 0.001}};
  report.largest_p = {{"fine", 0.97}};
  report.spearman_rho = 0.25;
  report.n_words_used = 2;

  const OlsResult fit = result_with({{"bad", 0.001}, {"fine", 0.97}});
  const std::string a = audit_report_json(report, fit);
  const std::string b = audit_report_json(report, fit);
  CHECK(a == b);
  CHECK(a.find("\"spearman_rho\": 0.25") != std::string::npos);

  std::ostringstream rankings;
  write_rankings_csv(rankings, report);
  CHECK(rankings.str() ==
        "section,rank,word,p\nsmallest_p,1,bad,0.001\nlargest_p,1,fine,0.97\n");

  std::ostringstream correlation;
  write_correlation_csv(correlation, report);
  CHECK(correlation.str() == "spearman_rho,n_words_used,excluded_zero_p,note\n0.25,2,0,\n");
}
