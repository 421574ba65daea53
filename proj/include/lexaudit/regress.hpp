#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "lexaudit/scorer.hpp"
#include "lexaudit/tokenize.hpp"

namespace lexaudit {

enum class FeatureMode { presence, counts };

// Dense column-major design matrix: intercept column of ones followed by one
// feature column per vocabulary word; response holds the score differences.
struct DesignMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;                    // includes the intercept
  std::vector<double> values;              // column-major, rows * cols
  std::vector<std::string> column_labels;  // "(intercept)", w1, w2, ...
  std::vector<double> response;

  double& at(std::size_t row, std::size_t col) { return values[col * rows + row]; }
  double at(std::size_t row, std::size_t col) const { return values[col * rows + row]; }
};

inline constexpr const char* kInterceptLabel = "(intercept)";

DesignMatrix build_design(std::span<const ScorePair> pairs,
                          std::span<const TokenCounts> doc_counts,
                          std::span<const std::string> vocabulary,
                          FeatureMode mode = FeatureMode::presence);

// Per-coefficient OLS output. Vectors are aligned with column_labels; dropped
// columns carry NaN statistics and dropped[j] = true.
struct OlsResult {
  std::vector<std::string> column_labels;
  std::vector<double> coefficients;
  std::vector<double> standard_errors;
  std::vector<double> t_statistics;
  std::vector<double> p_values;
  std::vector<bool> dropped;
  std::vector<std::string> dropped_columns;

  std::size_t rows = 0;
  std::size_t retained = 0;
  long degrees_of_freedom = 0;
  double residual_variance = 0;
  double r_squared = 0;
  bool exact_fit = false;       // SSR ~ 0: se=0, p=0, t undefined
  bool zero_variance = false;   // constant response: word p-values forced to 1
};

// Least squares via Householder QR (columns processed left to right; a
// column whose remaining norm after the previous reflectors is <= 1e-10 of
// its original norm is recorded in dropped_columns and excluded, so exact
// duplicates keep the first column in order). Throws Underdetermined when
// rows <= retained columns.
OlsResult ols_fit(const DesignMatrix& design);

// Upper-tail probability P(T > t) for Student's t with df degrees of
// freedom, via the regularized incomplete beta function.
double student_t_sf(double t, long degrees_of_freedom);

// Benjamini-Hochberg step-up adjustment; output is in input order.
std::vector<double> bh_adjust(std::span<const double> p_values);

// CSV: word, coefficient, std_error, t, p, p_bh, dropped. p_bh must be
// aligned with column_labels (NaN renders as an empty field).
void write_regression_csv(std::ostream& out, const OlsResult& result,
                          std::span<const double> p_bh);

// BH over the retained non-intercept words of a fit, aligned with
// column_labels (intercept and dropped entries are NaN).
std::vector<double> word_p_bh(const OlsResult& result);

}  // namespace lexaudit
