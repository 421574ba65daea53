#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "lexaudit/lexicon.hpp"
#include "lexaudit/regress.hpp"
#include "lexaudit/scorer.hpp"

namespace lexaudit {

struct RankedWord {
  std::string word;
  double p = 0;

  bool operator==(const RankedWord&) const = default;
};

struct WordRanking {
  std::vector<RankedWord> smallest;  // ascending p, ties lexicographic
  std::vector<RankedWord> largest;   // descending p, ties lexicographic
};

// Top-k word lists by regression p-value; the intercept and dropped columns
// never rank. Throws KTooLarge when k exceeds the retained vocabulary.
WordRanking rank_words(const OlsResult& result, std::size_t k);

// Spearman rank correlation with average-rank (mid-rank) tie handling.
double spearman(std::span<const double> xs, std::span<const double> ys);

struct CorrelationSummary {
  double rho = 0;
  std::size_t n_words_used = 0;
  std::size_t n_excluded_zero_p = 0;
};

// Correlates word happiness with regression p-values after removing words
// whose p-value is numerically zero (p < zero_p_threshold).
CorrelationSummary happiness_vs_p_correlation(const Lexicon& lexicon, const OlsResult& result,
                                              double zero_p_threshold);

struct CurvePoint {
  std::size_t rank = 0;  // 1-based position after sorting by difference
  std::string doc_id;
  double hedonometer_unit = 0;
  double reference_unit = 0;
  double difference = 0;
};

// Pairs sorted by difference ascending (ties by doc_id) for external plotting.
std::vector<CurvePoint> difference_curve(std::span<const ScorePair> pairs);

struct AuditReport {
  std::string domain;  // domain tag, or "pooled"
  std::vector<RankedWord> smallest_p;
  std::vector<RankedWord> largest_p;
  std::optional<double> spearman_rho;  // nullopt when the correlation is degenerate
  std::string degenerate_note;         // why spearman_rho is missing, if it is
  std::size_t n_words_used = 0;
  std::size_t excluded_zero_p = 0;
  std::size_t no_coverage_docs = 0;
};

std::string audit_report_json(const AuditReport& report, const OlsResult& result);
void write_rankings_csv(std::ostream& out, const AuditReport& report);
void write_correlation_csv(std::ostream& out, const AuditReport& report);
void write_curve_csv(std::ostream& out, std::span<const CurvePoint> curve);

}  // namespace lexaudit
