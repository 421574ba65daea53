#include "lexaudit/regress.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <ostream>

#include "lexaudit/errors.hpp"
#include "lexaudit/util.hpp"

namespace lexaudit {

namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();
constexpr double kRankTolerance = 1e-10;   // relative to the original column norm
constexpr double kExactFitTolerance = 1e-20;  // SSR relative to ||y||^2

double column_norm(std::span<const double> column) {
  double sum = 0;
  for (const double v : column) sum += v * v;
  return std::sqrt(sum);
}

// Regularized incomplete beta I_x(a, b) by Lentz continued fraction, with the
// symmetric switch at x = (a+1)/(a+b+2) so the fraction always converges fast.
double betacf(double a, double b, double x) {
  constexpr int kMaxIterations = 500;
  constexpr double kEps = 1e-15;
  constexpr double kFpMin = 1e-300;

  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::fabs(d) < kFpMin) d = kFpMin;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIterations; ++m) {
    const int m2 = 2 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kFpMin) d = kFpMin;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kFpMin) c = kFpMin;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kFpMin) d = kFpMin;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kFpMin) c = kFpMin;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::fabs(delta - 1.0) < kEps) return h;
  }
  raise(Errc::out_of_range, "incomplete beta continued fraction did not converge");
}

double reg_inc_beta(double a, double b, double x) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  const double log_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                           a * std::log(x) + b * std::log1p(-x);
  const double front = std::exp(log_front);
  if (x < (a + 1.0) / (a + b + 2.0)) return front * betacf(a, b, x) / a;
  return 1.0 - front * betacf(b, a, 1.0 - x) / b;
}

}  // namespace

DesignMatrix build_design(std::span<const ScorePair> pairs,
                          std::span<const TokenCounts> doc_counts,
                          std::span<const std::string> vocabulary, FeatureMode mode) {
  if (vocabulary.empty()) raise(Errc::empty_vocabulary, "design matrix needs a vocabulary");
  if (pairs.size() != doc_counts.size()) {
    raise(Errc::row_mismatch, "pairs (" + std::to_string(pairs.size()) + ") and documents (" +
                                  std::to_string(doc_counts.size()) + ") differ");
  }

  DesignMatrix design;
  design.rows = pairs.size();
  design.cols = vocabulary.size() + 1;
  design.values.assign(design.rows * design.cols, 0.0);
  design.column_labels.reserve(design.cols);
  design.column_labels.emplace_back(kInterceptLabel);
  design.response.resize(design.rows);

  for (std::size_t r = 0; r < design.rows; ++r) {
    design.at(r, 0) = 1.0;
    design.response[r] = pairs[r].difference;
  }
  for (std::size_t j = 0; j < vocabulary.size(); ++j) {
    design.column_labels.push_back(vocabulary[j]);
    const std::size_t col = j + 1;
    for (std::size_t r = 0; r < design.rows; ++r) {
      const auto it = doc_counts[r].counts.find(vocabulary[j]);
      if (it == doc_counts[r].counts.end() || it->second == 0) continue;
      design.at(r, col) =
          mode == FeatureMode::presence ? 1.0 : static_cast<double>(it->second);
    }
  }
  return design;
}

OlsResult ols_fit(const DesignMatrix& design) {
  const std::size_t n = design.rows;
  const std::size_t p = design.cols;
  if (p == 0 || design.values.size() != n * p || design.response.size() != n) {
    raise(Errc::row_mismatch, "design matrix shape is inconsistent");
  }

  OlsResult result;
  result.column_labels = design.column_labels;
  result.rows = n;
  result.coefficients.assign(p, kNan);
  result.standard_errors.assign(p, kNan);
  result.t_statistics.assign(p, kNan);
  result.p_values.assign(p, kNan);
  result.dropped.assign(p, false);

  const std::vector<double>& y = design.response;

  // Constant response: inference is meaningless, report the convention.
  const bool constant_response =
      n > 0 && std::all_of(y.begin(), y.end(), [&](double v) { return v == y.front(); });
  if (constant_response) {
    result.zero_variance = true;
    result.retained = p;
    result.degrees_of_freedom = n > p ? static_cast<long>(n - p) : 0;
    result.coefficients.assign(p, 0.0);
    result.coefficients[0] = y.empty() ? 0.0 : y.front();
    result.standard_errors.assign(p, 0.0);
    result.t_statistics.assign(p, 0.0);
    result.p_values.assign(p, 1.0);
    result.residual_variance = 0.0;
    result.r_squared = 0.0;
    return result;
  }

  // Householder QR, columns left to right, dependent columns dropped.
  std::vector<double> work(design.values);     // reflectors accumulate in place
  std::vector<double> qty(y);
  std::vector<double> taus;
  std::vector<std::size_t> retained;
  taus.reserve(p);
  retained.reserve(p);

  auto col = [&](std::size_t j) { return std::span<double>(work).subspan(j * n, n); };

  for (std::size_t j = 0; j < p; ++j) {
    const std::size_t k = retained.size();
    const double original_norm =
        column_norm(std::span<const double>(design.values).subspan(j * n, n));
    auto cj = col(j);
    const double sub_norm = column_norm(cj.subspan(std::min(k, n)));
    if (k >= n || sub_norm <= kRankTolerance * std::max(original_norm, 1e-300)) {
      result.dropped[j] = true;
      result.dropped_columns.push_back(design.column_labels[j]);
      continue;
    }

    // Build the reflector H = I - tau v v^T with v[0] = 1 that maps the
    // subcolumn onto beta * e1.
    const double x0 = cj[k];
    const double beta = x0 >= 0 ? -sub_norm : sub_norm;
    const double v0 = x0 - beta;
    const double tau = -v0 / beta;
    for (std::size_t r = k + 1; r < n; ++r) cj[r] /= v0;
    cj[k] = beta;
    taus.push_back(tau);

    // Apply to the remaining candidate columns and to y.
    for (std::size_t c = j + 1; c < p; ++c) {
      auto cc = col(c);
      double dot = cc[k];
      for (std::size_t r = k + 1; r < n; ++r) dot += cj[r] * cc[r];
      const double scale = tau * dot;
      cc[k] -= scale;
      for (std::size_t r = k + 1; r < n; ++r) cc[r] -= scale * cj[r];
    }
    {
      double dot = qty[k];
      for (std::size_t r = k + 1; r < n; ++r) dot += cj[r] * qty[r];
      const double scale = tau * dot;
      qty[k] -= scale;
      for (std::size_t r = k + 1; r < n; ++r) qty[r] -= scale * cj[r];
    }
    retained.push_back(j);
  }

  const std::size_t k = retained.size();
  result.retained = k;
  if (n <= k) {
    raise(Errc::underdetermined, "rows (" + std::to_string(n) +
                                     ") must exceed retained columns (" + std::to_string(k) + ")");
  }
  const long df = static_cast<long>(n - k);
  result.degrees_of_freedom = df;

  // Back-substitute R beta = (Q^T y)[0..k).
  std::vector<double> beta(k, 0.0);
  for (std::size_t i = k; i-- > 0;) {
    double value = qty[i];
    for (std::size_t m = i + 1; m < k; ++m) value -= work[retained[m] * n + i] * beta[m];
    beta[i] = value / work[retained[i] * n + i];
  }

  double ssr = 0;
  for (std::size_t r = k; r < n; ++r) ssr += qty[r] * qty[r];
  double y_norm2 = 0;
  double y_mean = 0;
  for (const double v : y) y_mean += v;
  y_mean /= static_cast<double>(n);
  double tss = 0;
  for (const double v : y) {
    y_norm2 += v * v;
    tss += (v - y_mean) * (v - y_mean);
  }

  const bool exact = ssr <= kExactFitTolerance * std::max(y_norm2, 1e-100);
  result.exact_fit = exact;
  const double s2 = exact ? 0.0 : ssr / static_cast<double>(df);
  result.residual_variance = s2;
  result.r_squared = tss > 0 ? std::clamp(1.0 - ssr / tss, 0.0, 1.0) : 0.0;
  if (exact) result.r_squared = 1.0;

  // diag of (X^T X)^-1 = row sums of squares of R^-1.
  std::vector<double> r_inv(k * k, 0.0);  // column-major, upper triangular
  for (std::size_t c = k; c-- > 0;) {
    r_inv[c * k + c] = 1.0 / work[retained[c] * n + c];
    for (std::size_t i = c; i-- > 0;) {
      double value = 0;
      for (std::size_t m = i + 1; m <= c; ++m) value -= work[retained[m] * n + i] * r_inv[c * k + m];
      r_inv[c * k + i] = value / work[retained[i] * n + i];
    }
  }

  for (std::size_t idx = 0; idx < k; ++idx) {
    const std::size_t j = retained[idx];
    double diag = 0;
    for (std::size_t m = idx; m < k; ++m) {
      const double v = r_inv[m * k + idx];
      diag += v * v;
    }
    result.coefficients[j] = beta[idx];
    const double se = std::sqrt(s2 * diag);
    result.standard_errors[j] = se;
    if (exact) {
      result.t_statistics[j] = kNan;
      result.p_values[j] = 0.0;
    } else {
      const double t = beta[idx] / se;
      result.t_statistics[j] = t;
      result.p_values[j] = 2.0 * student_t_sf(std::fabs(t), df);
    }
  }
  return result;
}

double student_t_sf(double t, long degrees_of_freedom) {
  if (degrees_of_freedom < 1) {
    raise(Errc::invalid_df, "degrees of freedom must be >= 1, got " +
                                std::to_string(degrees_of_freedom));
  }
  if (std::isnan(t)) return kNan;
  if (t == 0.0) return 0.5;
  if (t < 0.0) return 1.0 - student_t_sf(-t, degrees_of_freedom);
  if (std::isinf(t)) return 0.0;
  const double df = static_cast<double>(degrees_of_freedom);
  const double x = df / (df + t * t);
  return 0.5 * reg_inc_beta(df / 2.0, 0.5, x);
}

std::vector<double> bh_adjust(std::span<const double> p_values) {
  const std::size_t n = p_values.size();
  for (const double p : p_values) {
    if (!(p >= 0.0 && p <= 1.0)) {
      raise(Errc::out_of_range, "p-value " + format_double(p) + " outside [0,1]");
    }
  }
  if (n == 0) return {};

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return p_values[a] < p_values[b]; });

  std::vector<double> adjusted_sorted(n);
  for (std::size_t rank = 0; rank < n; ++rank) {
    adjusted_sorted[rank] =
        p_values[order[rank]] * static_cast<double>(n) / static_cast<double>(rank + 1);
  }
  for (std::size_t rank = n - 1; rank-- > 0;) {
    adjusted_sorted[rank] = std::min(adjusted_sorted[rank], adjusted_sorted[rank + 1]);
  }
  std::vector<double> adjusted(n);
  for (std::size_t rank = 0; rank < n; ++rank) {
    adjusted[order[rank]] = std::min(adjusted_sorted[rank], 1.0);
  }
  return adjusted;
}

std::vector<double> word_p_bh(const OlsResult& result) {
  std::vector<double> aligned(result.column_labels.size(), kNan);
  std::vector<double> ps;
  std::vector<std::size_t> indices;
  for (std::size_t j = 1; j < result.column_labels.size(); ++j) {
    if (result.dropped[j]) continue;
    ps.push_back(result.p_values[j]);
    indices.push_back(j);
  }
  const auto adjusted = bh_adjust(ps);
  for (std::size_t i = 0; i < indices.size(); ++i) aligned[indices[i]] = adjusted[i];
  return aligned;
}

namespace {

std::string csv_number(double value) {
  if (std::isnan(value)) return "";
  return format_double(value);
}

}  // namespace

void write_regression_csv(std::ostream& out, const OlsResult& result,
                          std::span<const double> p_bh) {
  out << "word,coefficient,std_error,t,p,p_bh,dropped\n";
  for (std::size_t j = 0; j < result.column_labels.size(); ++j) {
    out << csv_field(result.column_labels[j]) << ',' << csv_number(result.coefficients[j]) << ','
        << csv_number(result.standard_errors[j]) << ',' << csv_number(result.t_statistics[j])
        << ',' << csv_number(result.p_values[j]) << ','
        << (j < p_bh.size() ? csv_number(p_bh[j]) : std::string()) << ','
        << (result.dropped[j] ? "true" : "false") << '\n';
  }
}

}  // namespace lexaudit
