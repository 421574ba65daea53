#include "lexaudit/analyze.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>

#include <json.hpp>

#include "lexaudit/errors.hpp"
#include "lexaudit/util.hpp"

namespace lexaudit {

WordRanking rank_words(const OlsResult& result, std::size_t k) {
  if (k < 1) raise(Errc::out_of_range, "k must be >= 1");

  std::vector<RankedWord> words;
  for (std::size_t j = 1; j < result.column_labels.size(); ++j) {
    if (result.dropped[j]) continue;
    words.push_back(RankedWord{result.column_labels[j], result.p_values[j]});
  }
  if (k > words.size()) {
    raise(Errc::k_too_large, "k=" + std::to_string(k) + " exceeds the " +
                                 std::to_string(words.size()) + " retained words");
  }

  WordRanking ranking;
  auto by_p_asc = [](const RankedWord& a, const RankedWord& b) {
    if (a.p != b.p) return a.p < b.p;
    return a.word < b.word;
  };
  auto by_p_desc = [](const RankedWord& a, const RankedWord& b) {
    if (a.p != b.p) return a.p > b.p;
    return a.word < b.word;
  };

  std::vector<RankedWord> sorted = words;
  std::sort(sorted.begin(), sorted.end(), by_p_asc);
  ranking.smallest.assign(sorted.begin(), sorted.begin() + static_cast<std::ptrdiff_t>(k));
  std::sort(sorted.begin(), sorted.end(), by_p_desc);
  ranking.largest.assign(sorted.begin(), sorted.begin() + static_cast<std::ptrdiff_t>(k));
  return ranking;
}

namespace {

std::vector<double> midranks(std::span<const double> values) {
  const std::size_t n = values.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  std::vector<double> ranks(n);
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && values[order[j + 1]] == values[order[i]]) ++j;
    const double rank = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
    for (std::size_t m = i; m <= j; ++m) ranks[order[m]] = rank;
    i = j + 1;
  }
  return ranks;
}

}  // namespace

double spearman(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size()) {
    raise(Errc::degenerate_input, "sequences differ in length (" + std::to_string(xs.size()) +
                                      " vs " + std::to_string(ys.size()) + ")");
  }
  const std::size_t n = xs.size();
  if (n < 2) raise(Errc::degenerate_input, "need at least 2 observations");
  const auto all_equal = [](std::span<const double> v) {
    return std::all_of(v.begin(), v.end(), [&](double x) { return x == v.front(); });
  };
  if (all_equal(xs)) raise(Errc::degenerate_input, "first sequence is constant");
  if (all_equal(ys)) raise(Errc::degenerate_input, "second sequence is constant");

  const auto rx = midranks(xs);
  const auto ry = midranks(ys);
  const double mean = (static_cast<double>(n) + 1.0) / 2.0;  // mid-ranks always average to this
  double num = 0, dx = 0, dy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double a = rx[i] - mean;
    const double b = ry[i] - mean;
    num += a * b;
    dx += a * a;
    dy += b * b;
  }
  return num / std::sqrt(dx * dy);
}

CorrelationSummary happiness_vs_p_correlation(const Lexicon& lexicon, const OlsResult& result,
                                              double zero_p_threshold) {
  std::vector<double> happiness;
  std::vector<double> p_values;
  std::size_t excluded = 0;
  for (std::size_t j = 1; j < result.column_labels.size(); ++j) {
    if (result.dropped[j]) continue;
    const double p = result.p_values[j];
    if (p < zero_p_threshold) {
      ++excluded;
      continue;
    }
    const double* h = lexicon.find(result.column_labels[j]);
    if (h == nullptr) {
      raise(Errc::degenerate_input,
            "regression word `" + result.column_labels[j] + "` missing from lexicon");
    }
    happiness.push_back(*h);
    p_values.push_back(p);
  }
  if (happiness.size() < 2) {
    raise(Errc::degenerate_input, "fewer than 2 words remain after removing p < " +
                                      format_double(zero_p_threshold));
  }
  CorrelationSummary summary;
  summary.rho = spearman(happiness, p_values);
  summary.n_words_used = happiness.size();
  summary.n_excluded_zero_p = excluded;
  return summary;
}

std::vector<CurvePoint> difference_curve(std::span<const ScorePair> pairs) {
  if (pairs.empty()) raise(Errc::empty_input, "difference_curve needs at least one pair");
  std::vector<const ScorePair*> sorted;
  sorted.reserve(pairs.size());
  for (const auto& pair : pairs) sorted.push_back(&pair);
  std::sort(sorted.begin(), sorted.end(), [](const ScorePair* a, const ScorePair* b) {
    if (a->difference != b->difference) return a->difference < b->difference;
    return a->doc_id < b->doc_id;
  });
  std::vector<CurvePoint> curve;
  curve.reserve(sorted.size());
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    curve.push_back(CurvePoint{i + 1, sorted[i]->doc_id, sorted[i]->hedonometer_unit,
                               sorted[i]->reference_unit, sorted[i]->difference});
  }
  return curve;
}

std::string audit_report_json(const AuditReport& report, const OlsResult& result) {
  nlohmann::json j;
  j["domain"] = report.domain;
  auto ranked = [](const std::vector<RankedWord>& words) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& w : words) arr.push_back({{"word", w.word}, {"p", w.p}});
    return arr;
  };
  j["smallest_p"] = ranked(report.smallest_p);
  j["largest_p"] = ranked(report.largest_p);
  if (report.spearman_rho) {
    j["spearman_rho"] = *report.spearman_rho;
  } else {
    j["spearman_rho"] = nullptr;
    j["degenerate_note"] = report.degenerate_note;
  }
  j["n_words_used"] = report.n_words_used;
  j["excluded_zero_p"] = report.excluded_zero_p;
  j["no_coverage_docs"] = report.no_coverage_docs;
  j["rows"] = result.rows;
  j["retained_columns"] = result.retained;
  j["degrees_of_freedom"] = result.degrees_of_freedom;
  j["r_squared"] = result.r_squared;
  j["dropped_columns"] = result.dropped_columns;
  j["exact_fit"] = result.exact_fit;
  j["zero_variance"] = result.zero_variance;
  return j.dump(2) + "\n";
}

void write_rankings_csv(std::ostream& out, const AuditReport& report) {
  out << "section,rank,word,p\n";
  for (std::size_t i = 0; i < report.smallest_p.size(); ++i) {
    out << "smallest_p," << i + 1 << ',' << csv_field(report.smallest_p[i].word) << ','
        << format_double(report.smallest_p[i].p) << '\n';
  }
  for (std::size_t i = 0; i < report.largest_p.size(); ++i) {
    out << "largest_p," << i + 1 << ',' << csv_field(report.largest_p[i].word) << ','
        << format_double(report.largest_p[i].p) << '\n';
  }
}

void write_correlation_csv(std::ostream& out, const AuditReport& report) {
  out << "spearman_rho,n_words_used,excluded_zero_p,note\n";
  out << (report.spearman_rho ? format_double(*report.spearman_rho) : std::string()) << ','
      << report.n_words_used << ',' << report.excluded_zero_p << ','
      << csv_field(report.degenerate_note) << '\n';
}

void write_curve_csv(std::ostream& out, std::span<const CurvePoint> curve) {
  out << "rank,doc_id,hedonometer_unit,reference_unit,difference\n";
  for (const auto& point : curve) {
    out << point.rank << ',' << csv_field(point.doc_id) << ','
        << format_double(point.hedonometer_unit) << ',' << format_double(point.reference_unit)
        << ',' << format_double(point.difference) << '\n';
  }
}

}  // namespace lexaudit
