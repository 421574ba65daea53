#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "lexaudit/analyze.hpp"
#include "lexaudit/config.hpp"
#include "lexaudit/corpus.hpp"
#include "lexaudit/errors.hpp"
#include "lexaudit/reference.hpp"
#include "lexaudit/scorer.hpp"

namespace lexaudit {

// Exit codes shared by every subcommand.
inline constexpr int kExitOk = 0;
inline constexpr int kExitDegenerate = 1;  // analysis degeneracy warnings only
inline constexpr int kExitInputError = 2;
inline constexpr int kExitProviderError = 3;

struct ScoreRow {
  std::string doc_id;
  std::string domain;
  double hedonometer_raw = 0;
  double hedonometer_unit = 0;
  double reference_unit = 0;
  double difference = 0;
  std::size_t matched_words = 0;
  std::size_t total_tokens = 0;
};

struct ScoreOutcome {
  std::vector<ScoreRow> rows;                  // covered documents, corpus order
  std::vector<std::string> no_coverage_ids;    // excluded documents, corpus order
};

struct ScopeOutcome {
  std::string name;  // domain tag or "pooled"
  AuditReport report;
  bool failed = false;        // regression could not run
  bool degenerate = false;    // ran, but with a degeneracy flag
  std::string failure_reason;
};

struct AuditOutcome {
  int exit_code = kExitOk;
  std::vector<ScopeOutcome> scopes;
  std::size_t no_coverage_docs = 0;
  std::size_t vocabulary_size = 0;
};

// The subcommand bodies. They write their files under config.output_dir and
// return the process exit code; errors of category input/provider are thrown
// as Error and mapped by the caller (run_cli does this).
ScoreOutcome compute_scores(const RunConfig& config);
int run_score(const RunConfig& config);
int run_coverage(const RunConfig& config);
AuditOutcome run_audit(const RunConfig& config);
int run_synth(const RunConfig& config);

struct CorrelateOptions {
  std::filesystem::path file_a;
  std::filesystem::path file_b;
  std::string key_column_a = "0";    // name or 0-based index
  std::string value_column_a = "1";
  std::string key_column_b = "0";
  std::string value_column_b = "1";
};

struct CorrelateResult {
  double rho = 0;
  std::size_t n_common = 0;
};

CorrelateResult correlate_files(const CorrelateOptions& options);

int error_exit_code(const Error& error);

}  // namespace lexaudit
