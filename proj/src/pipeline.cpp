#include "lexaudit/pipeline.hpp"

#include <algorithm>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "lexaudit/errors.hpp"
#include "lexaudit/regress.hpp"
#include "lexaudit/synth.hpp"
#include "lexaudit/tokenize.hpp"
#include "lexaudit/util.hpp"

namespace lexaudit {

namespace {

Lexicon load_run_lexicon(const RunConfig& config) {
  if (config.lexicon_path.empty()) raise(Errc::config_error, "no lexicon path configured");
  auto load = load_lexicon_file(config.lexicon_path);
  if (load.duplicate_overwrites > 0) {
    std::cerr << "warning: " << load.duplicate_overwrites
              << " duplicate lexicon word(s) kept their last occurrence\n";
  }
  if (config.lens_low || config.lens_high) {
    if (!config.lens_low || !config.lens_high) {
      raise(Errc::config_error, "lens needs both lens_low and lens_high");
    }
    return apply_lens(load.lexicon, *config.lens_low, *config.lens_high);
  }
  return load.lexicon;
}

std::unique_ptr<ReferenceScorer> make_scorer(const RunConfig& config, const Lexicon& lexicon) {
  if (config.provider.empty()) {
    raise(Errc::config_error,
          "no provider configured (use http, stub:lexicon-echo, stub:perturbed-lexicon, or "
          "stub:constant)");
  }
  if (config.provider == "http") return http_scorer(config.http);
  if (config.provider.rfind("stub:", 0) != 0) {
    raise(Errc::config_error, "unknown provider `" + config.provider + "`");
  }
  const std::string kind = config.provider.substr(5);

  StubParams params;
  params.constant = config.stub_constant;
  Lexicon stub_lexicon;
  if (kind == "lexicon-echo" || kind == "perturbed-lexicon") {
    if (!config.stub_lexicon_path.empty()) {
      stub_lexicon = load_lexicon_file(config.stub_lexicon_path).lexicon;
    } else {
      stub_lexicon = lexicon;
    }
    params.lexicon = &stub_lexicon;
    if (kind == "perturbed-lexicon" && !config.stub_overrides_path.empty()) {
      const auto overrides = load_lexicon_file(config.stub_overrides_path).lexicon;
      params.overrides = overrides.entries();
    }
  }
  return stub_scorer(kind, std::move(params));  // stub copies what it needs
}

std::string sanitize_dir_name(const std::string& tag) {
  std::string out;
  out.reserve(tag.size());
  for (const char ch : tag) {
    const bool safe = (ch >= 'a' && ch <= 'z') || (ch >= 'A' && ch <= 'Z') ||
                      (ch >= '0' && ch <= '9') || ch == '.' || ch == '_' || ch == '-';
    out.push_back(safe ? ch : '_');
  }
  return out.empty() ? "_" : out;
}

void write_scores_csv(const std::filesystem::path& path, const std::vector<ScoreRow>& rows) {
  std::ostringstream out;
  out << "doc_id,domain,hedonometer_raw,hedonometer_unit,reference_unit,difference,"
         "matched_words,total_tokens\n";
  for (const auto& row : rows) {
    out << csv_field(row.doc_id) << ',' << csv_field(row.domain) << ','
        << format_double(row.hedonometer_raw) << ',' << format_double(row.hedonometer_unit) << ','
        << format_double(row.reference_unit) << ',' << format_double(row.difference) << ','
        << row.matched_words << ',' << row.total_tokens << '\n';
  }
  write_file(path, out.str());
}

void write_no_coverage(const std::filesystem::path& path, const std::vector<std::string>& ids) {
  std::string out;
  for (const auto& id : ids) {
    out += id;
    out.push_back('\n');
  }
  write_file(path, out);
}

struct LoadedRun {
  Lexicon lexicon;
  Corpus corpus;
  std::vector<TokenCounts> counts;            // aligned with corpus
  ScoreOutcome scores;
  std::vector<ScorePair> pairs;               // aligned with scores.rows
  std::vector<const TokenCounts*> pair_counts;  // aligned with pairs
};

LoadedRun score_run(const RunConfig& config) {
  LoadedRun run;
  run.lexicon = load_run_lexicon(config);
  if (config.corpus_path.empty()) raise(Errc::config_error, "no corpus path configured");
  run.corpus = load_corpus_file(config.corpus_path);

  run.counts.reserve(run.corpus.size());
  for (const auto& doc : run.corpus) run.counts.push_back(count_text(doc.text));

  // hedonometer side first; only covered documents are sent to the reference
  std::vector<std::size_t> covered;
  std::vector<DocumentScore> doc_scores;
  for (std::size_t i = 0; i < run.corpus.size(); ++i) {
    try {
      doc_scores.push_back(score_counts(run.counts[i], run.lexicon));
      covered.push_back(i);
    } catch (const Error& err) {
      if (err.code() != Errc::no_coverage) throw;
      run.scores.no_coverage_ids.push_back(run.corpus[i].id);
    }
  }

  Corpus covered_docs;
  covered_docs.reserve(covered.size());
  for (const std::size_t i : covered) covered_docs.push_back(run.corpus[i]);

  std::vector<ReferenceScore> reference_scores;
  if (!covered_docs.empty()) {
    const auto scorer = make_scorer(config, run.lexicon);
    std::optional<ScoreCache> cache;
    if (!config.cache_path.empty()) cache.emplace(config.cache_path);
    reference_scores = score_batch(covered_docs, *scorer, cache ? &*cache : nullptr);
  }

  run.scores.rows.reserve(covered.size());
  run.pairs.reserve(covered.size());
  run.pair_counts.reserve(covered.size());
  for (std::size_t k = 0; k < covered.size(); ++k) {
    const std::size_t i = covered[k];
    ScoreRow row;
    row.doc_id = run.corpus[i].id;
    row.domain = run.corpus[i].domain;
    row.hedonometer_raw = doc_scores[k].raw;
    row.hedonometer_unit = doc_scores[k].unit;
    row.reference_unit = reference_scores[k].score;
    row.difference = score_difference(row.hedonometer_unit, row.reference_unit);
    row.matched_words = doc_scores[k].matched_tokens;
    row.total_tokens = doc_scores[k].total_tokens;
    run.scores.rows.push_back(row);
    run.pairs.push_back(ScorePair{row.doc_id, row.hedonometer_unit, row.reference_unit,
                                  row.difference});
    run.pair_counts.push_back(&run.counts[i]);
  }
  return run;
}

nlohmann::json manifest_json(const RunConfig& config, const LoadedRun& run,
                             std::size_t vocabulary_size) {
  nlohmann::json manifest;
  manifest["config_hash"] = fnv1a64_hex(write_config(config));
  manifest["lexicon_hash"] = fnv1a64_hex(read_file(config.lexicon_path));
  manifest["corpus_hash"] = fnv1a64_hex(read_file(config.corpus_path));
  manifest["provider"] = config.provider;
  manifest["features"] = feature_mode_name(config.features);
  manifest["min_domains"] = config.min_domains;
  manifest["zero_p_threshold"] = config.zero_p_threshold;
  manifest["lexicon_size"] = run.lexicon.size();
  manifest["documents"] = run.corpus.size();
  manifest["covered_documents"] = run.scores.rows.size();
  manifest["no_coverage_documents"] = run.scores.no_coverage_ids.size();
  manifest["vocabulary_size"] = vocabulary_size;
  return manifest;
}

}  // namespace

ScoreOutcome compute_scores(const RunConfig& config) { return score_run(config).scores; }

int run_score(const RunConfig& config) {
  if (config.output_dir.empty()) raise(Errc::config_error, "no output directory configured");
  const LoadedRun run = score_run(config);
  std::filesystem::create_directories(config.output_dir);
  write_scores_csv(config.output_dir / "scores.csv", run.scores.rows);
  write_no_coverage(config.output_dir / "no_coverage.txt", run.scores.no_coverage_ids);
  if (!run.scores.no_coverage_ids.empty()) {
    std::cerr << "warning: " << run.scores.no_coverage_ids.size()
              << " document(s) shared no word with the lexicon and were excluded\n";
  }
  return kExitOk;
}

int run_coverage(const RunConfig& config) {
  if (config.output_dir.empty()) raise(Errc::config_error, "no output directory configured");
  const Lexicon lexicon = load_run_lexicon(config);
  const Corpus corpus = load_corpus_file(config.corpus_path);
  const CoverageStats stats = coverage_stats(corpus, lexicon);

  std::filesystem::create_directories(config.output_dir);
  {
    std::ostringstream out;
    out << "domain,distinct_lexicon_words\n";
    for (const auto& [domain, count] : stats.per_domain) {
      out << csv_field(domain) << ',' << count << '\n';
    }
    write_file(config.output_dir / "coverage_per_domain.csv", out.str());
  }
  {
    std::ostringstream out;
    out << "domains,words\n";
    for (const auto& [k, count] : stats.overlap) out << k << ',' << count << '\n';
    out << "total," << stats.total_distinct << '\n';
    write_file(config.output_dir / "coverage_overlap.csv", out.str());
  }
  std::cerr << "coverage: " << stats.total_distinct << " distinct lexicon words across "
            << stats.per_domain.size() << " domain(s)\n";
  return kExitOk;
}

namespace {

ScopeOutcome analyze_scope(const std::string& name, const RunConfig& config,
                           const Lexicon& lexicon, const std::vector<ScorePair>& pairs,
                           const std::vector<TokenCounts>& counts,
                           const std::vector<std::string>& vocabulary,
                           std::size_t no_coverage_docs,
                           const std::filesystem::path& scope_dir) {
  ScopeOutcome outcome;
  outcome.name = name;
  outcome.report.domain = name;
  outcome.report.no_coverage_docs = no_coverage_docs;
  std::filesystem::create_directories(scope_dir);

  OlsResult fit;
  try {
    const DesignMatrix design = build_design(pairs, counts, vocabulary, config.features);
    fit = ols_fit(design);
  } catch (const Error& err) {
    if (err.category() != ErrorCategory::degeneracy) throw;
    outcome.failed = true;
    outcome.degenerate = true;
    outcome.failure_reason = err.what();
    nlohmann::json j;
    j["domain"] = name;
    j["error"] = outcome.failure_reason;
    j["no_coverage_docs"] = no_coverage_docs;
    write_file(scope_dir / "report.json", j.dump(2) + "\n");
    return outcome;
  }

  if (fit.zero_variance || fit.exact_fit) outcome.degenerate = true;

  const std::size_t eligible = [&] {
    std::size_t count = 0;
    for (std::size_t j = 1; j < fit.column_labels.size(); ++j) {
      if (!fit.dropped[j]) ++count;
    }
    return count;
  }();
  const std::size_t k = std::min<std::size_t>(config.top_k, eligible);
  if (k >= 1) {
    const WordRanking ranking = rank_words(fit, k);
    outcome.report.smallest_p = ranking.smallest;
    outcome.report.largest_p = ranking.largest;
  }

  try {
    const CorrelationSummary corr =
        happiness_vs_p_correlation(lexicon, fit, config.zero_p_threshold);
    outcome.report.spearman_rho = corr.rho;
    outcome.report.n_words_used = corr.n_words_used;
    outcome.report.excluded_zero_p = corr.n_excluded_zero_p;
  } catch (const Error& err) {
    if (err.code() != Errc::degenerate_input) throw;
    outcome.degenerate = true;
    outcome.report.degenerate_note = err.what();
  }

  const auto p_bh = word_p_bh(fit);
  {
    std::ostringstream out;
    write_regression_csv(out, fit, p_bh);
    write_file(scope_dir / "regression.csv", out.str());
  }
  {
    std::ostringstream out;
    write_rankings_csv(out, outcome.report);
    write_file(scope_dir / "rankings.csv", out.str());
  }
  {
    std::ostringstream out;
    write_correlation_csv(out, outcome.report);
    write_file(scope_dir / "correlation.csv", out.str());
  }
  {
    const auto curve = difference_curve(pairs);
    std::ostringstream out;
    write_curve_csv(out, curve);
    write_file(scope_dir / "curve.csv", out.str());
  }
  write_file(scope_dir / "report.json", audit_report_json(outcome.report, fit));
  return outcome;
}

}  // namespace

AuditOutcome run_audit(const RunConfig& config) {
  if (config.output_dir.empty()) raise(Errc::config_error, "no output directory configured");
  const LoadedRun run = score_run(config);

  std::filesystem::create_directories(config.output_dir);
  write_scores_csv(config.output_dir / "scores.csv", run.scores.rows);
  write_no_coverage(config.output_dir / "no_coverage.txt", run.scores.no_coverage_ids);

  AuditOutcome outcome;
  outcome.no_coverage_docs = run.scores.no_coverage_ids.size();

  std::vector<std::string> vocabulary;
  try {
    vocabulary = select_vocabulary(run.corpus, run.lexicon,
                                   static_cast<std::size_t>(config.min_domains));
  } catch (const Error& err) {
    if (err.category() != ErrorCategory::degeneracy) throw;
    outcome.exit_code = kExitDegenerate;
    nlohmann::json manifest = manifest_json(config, run, 0);
    manifest["error"] = err.what();
    write_file(config.output_dir / "manifest.json", manifest.dump(2) + "\n");
    std::cerr << "warning: " << err.what() << "\n";
    return outcome;
  }
  outcome.vocabulary_size = vocabulary.size();

  // group covered documents per domain, preserving corpus order
  std::map<std::string, std::vector<std::size_t>> by_domain;
  std::map<std::string, std::size_t> no_coverage_by_domain;
  for (std::size_t i = 0; i < run.scores.rows.size(); ++i) {
    by_domain[run.scores.rows[i].domain].push_back(i);
  }
  {
    std::map<std::string, std::size_t> doc_domain_counts;
    for (const auto& doc : run.corpus) ++doc_domain_counts[doc.domain];
    for (const auto& [domain, total] : doc_domain_counts) {
      const auto it = by_domain.find(domain);
      const std::size_t covered = it == by_domain.end() ? 0 : it->second.size();
      no_coverage_by_domain[domain] = total - covered;
    }
  }

  auto scope_pairs = [&](const std::vector<std::size_t>& indices) {
    std::pair<std::vector<ScorePair>, std::vector<TokenCounts>> out;
    out.first.reserve(indices.size());
    out.second.reserve(indices.size());
    for (const std::size_t i : indices) {
      out.first.push_back(run.pairs[i]);
      out.second.push_back(*run.pair_counts[i]);
    }
    return out;
  };

  std::set<std::string> used_dirs;
  auto scope_dir_for = [&](const std::string& base) {
    std::string candidate = base;
    std::size_t suffix = 2;
    while (!used_dirs.insert(candidate).second) {
      candidate = base + "_" + std::to_string(suffix++);
    }
    return config.output_dir / candidate;
  };

  for (const auto& [domain, indices] : by_domain) {
    const auto [pairs, counts] = scope_pairs(indices);
    outcome.scopes.push_back(analyze_scope(domain, config, run.lexicon, pairs, counts, vocabulary,
                                           no_coverage_by_domain[domain],
                                           scope_dir_for("domain_" + sanitize_dir_name(domain))));
  }
  {
    std::vector<std::size_t> all(run.pairs.size());
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
    const auto [pairs, counts] = scope_pairs(all);
    outcome.scopes.push_back(analyze_scope("pooled", config, run.lexicon, pairs, counts,
                                           vocabulary, outcome.no_coverage_docs,
                                           scope_dir_for("pooled")));
  }

  for (const auto& scope : outcome.scopes) {
    if (scope.degenerate || scope.failed) outcome.exit_code = kExitDegenerate;
    if (scope.failed) {
      std::cerr << "warning: scope `" << scope.name << "` not analyzed: " << scope.failure_reason
                << "\n";
    }
  }

  write_file(config.output_dir / "manifest.json",
             manifest_json(config, run, vocabulary.size()).dump(2) + "\n");
  return outcome;
}

int run_synth(const RunConfig& config) {
  if (config.synth_output.empty()) raise(Errc::config_error, "no synth output path configured");
  const Lexicon lexicon = load_lexicon_file(config.lexicon_path).lexicon;  // lens ignored here
  SynthParams params;
  params.seed = config.seed;
  params.n_docs = config.synth_docs;
  params.domains = config.synth_domains;
  params.vocab_size = config.synth_vocab;
  params.words_min = config.synth_words_min;
  params.words_max = config.synth_words_max;
  const Corpus corpus = generate_corpus(lexicon, params);

  std::ostringstream out;
  write_corpus(out, corpus);
  if (config.synth_output.has_parent_path()) {
    std::filesystem::create_directories(config.synth_output.parent_path());
  }
  write_file(config.synth_output, out.str());
  std::cerr << "synth: wrote " << corpus.size() << " document(s) to "
            << config.synth_output.string() << "\n";
  return kExitOk;
}

namespace {

struct RankFile {
  std::map<std::string, double> values;
};

RankFile load_rank_file(const std::filesystem::path& path, const std::string& key_column,
                        const std::string& value_column) {
  const std::string content = read_file(path);
  std::istringstream in(content);
  std::string line;
  std::vector<std::vector<std::string>> rows;
  char delimiter = ',';
  bool first = true;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (first) {
      delimiter = line.find('\t') != std::string::npos ? '\t' : ',';
      first = false;
    }
    rows.push_back(csv_split(line, delimiter));
  }
  if (rows.empty()) raise(Errc::empty_input, "no rows in " + path.string());

  auto column_index = [&](const std::string& spec, const std::vector<std::string>& header,
                          bool header_present) -> std::size_t {
    if (const auto index = parse_uint(spec)) return static_cast<std::size_t>(*index);
    if (!header_present) {
      raise(Errc::config_error,
            "column `" + spec + "` needs a header row in " + path.string());
    }
    const auto it = std::find(header.begin(), header.end(), spec);
    if (it == header.end()) {
      raise(Errc::config_error, "no column `" + spec + "` in " + path.string());
    }
    return static_cast<std::size_t>(it - header.begin());
  };

  // header detection: value field of the first row fails to parse as a number
  const std::size_t probe_value_col =
      parse_uint(value_column) ? static_cast<std::size_t>(*parse_uint(value_column)) : 1;
  const bool header_present =
      rows.front().size() <= probe_value_col || !parse_double(rows.front()[probe_value_col]);

  const std::size_t key_col = column_index(key_column, rows.front(), header_present);
  const std::size_t value_col = column_index(value_column, rows.front(), header_present);

  RankFile out;
  for (std::size_t r = header_present ? 1 : 0; r < rows.size(); ++r) {
    const auto& row = rows[r];
    if (key_col >= row.size() || value_col >= row.size()) continue;
    const auto value = parse_double(row[value_col]);
    if (!value) continue;  // rows without a numeric value (e.g. dropped columns) are skipped
    out.values[row[key_col]] = *value;
  }
  if (out.values.empty()) {
    raise(Errc::malformed_line, "no usable (key, value) rows in " + path.string());
  }
  return out;
}

}  // namespace

CorrelateResult correlate_files(const CorrelateOptions& options) {
  const RankFile a = load_rank_file(options.file_a, options.key_column_a, options.value_column_a);
  const RankFile b = load_rank_file(options.file_b, options.key_column_b, options.value_column_b);

  std::vector<double> xs;
  std::vector<double> ys;
  for (const auto& [key, value] : a.values) {
    const auto it = b.values.find(key);
    if (it == b.values.end()) continue;
    xs.push_back(value);
    ys.push_back(it->second);
  }
  if (xs.size() < 2) {
    raise(Errc::degenerate_input,
          "only " + std::to_string(xs.size()) + " key(s) shared between the two files");
  }
  return CorrelateResult{spearman(xs, ys), xs.size()};
}

int error_exit_code(const Error& error) {
  switch (error.category()) {
    case ErrorCategory::provider: return kExitProviderError;
    case ErrorCategory::degeneracy: return kExitDegenerate;
    case ErrorCategory::input: return kExitInputError;
  }
  return kExitInputError;
}

}  // namespace lexaudit
