#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "lexaudit/config.hpp"
#include "lexaudit/errors.hpp"
#include "lexaudit/pipeline.hpp"
#include "lexaudit/util.hpp"

namespace {

using lexaudit::RunConfig;

// Every flag is optional; values land in the RunConfig only when the user
// passed them, so the precedence is defaults < config file < flags.
struct Overrides {
  std::optional<std::string> config_file;
  std::optional<std::string> lexicon, corpus, cache, output, provider;
  std::optional<std::string> stub_lexicon, stub_overrides;
  std::optional<double> stub_constant;
  std::optional<std::string> endpoint, auth_header, auth_env, provider_name;
  std::optional<std::string> request_docs_field, request_id_field, request_text_field;
  std::optional<std::string> request_doc_extra, response_docs_field, response_id_field;
  std::optional<std::string> response_score_path;
  std::optional<std::uint64_t> batch_size, concurrency, retries, backoff_ms, timeout_ms;
  std::optional<double> lens_low, lens_high;
  std::optional<std::uint64_t> min_domains, top_k, seed;
  std::optional<std::string> features;
  std::optional<double> zero_p_threshold;
  std::optional<std::uint64_t> synth_docs, synth_vocab, synth_words_min, synth_words_max;
  std::optional<std::string> synth_domains, synth_output;
};

void add_common_options(CLI::App& app, Overrides& o) {
  app.add_option("--config", o.config_file, "key = value config file; flags override it");
  app.add_option("--lexicon", o.lexicon, "lexicon TSV (word<TAB>score)");
  app.add_option("--corpus", o.corpus, "corpus JSONL ({\"id\",\"domain\",\"text\"})");
  app.add_option("--output", o.output, "output directory");
  app.add_option("--lens-low", o.lens_low, "lens exclusion band lower bound");
  app.add_option("--lens-high", o.lens_high, "lens exclusion band upper bound");
  app.add_option("--seed", o.seed, "random seed");
}

void add_provider_options(CLI::App& app, Overrides& o) {
  app.add_option("--cache", o.cache, "score cache JSONL path");
  app.add_option("--provider", o.provider,
                 "http | stub:lexicon-echo | stub:perturbed-lexicon | stub:constant");
  app.add_option("--stub-lexicon", o.stub_lexicon, "lexicon used by echo/perturbed stubs");
  app.add_option("--stub-overrides", o.stub_overrides,
                 "word<TAB>happiness overrides for the perturbed stub");
  app.add_option("--stub-constant", o.stub_constant, "score returned by the constant stub");
  app.add_option("--endpoint", o.endpoint, "HTTP provider endpoint URL");
  app.add_option("--auth-header", o.auth_header, "auth header name");
  app.add_option("--auth-env", o.auth_env, "environment variable holding the secret");
  app.add_option("--provider-name", o.provider_name, "provider label used in the cache");
  app.add_option("--request-docs-field", o.request_docs_field, "request documents array field");
  app.add_option("--request-id-field", o.request_id_field, "per-document id field");
  app.add_option("--request-text-field", o.request_text_field, "per-document text field");
  app.add_option("--request-doc-extra", o.request_doc_extra,
                 "JSON object merged into each request document");
  app.add_option("--response-docs-field", o.response_docs_field, "response documents array field");
  app.add_option("--response-id-field", o.response_id_field, "response per-document id field");
  app.add_option("--response-score-path", o.response_score_path,
                 "dot path to the score inside a response document");
  app.add_option("--batch-size", o.batch_size, "documents per request");
  app.add_option("--concurrency", o.concurrency, "max in-flight requests");
  app.add_option("--retries", o.retries, "retry attempts for transient failures");
  app.add_option("--backoff-ms", o.backoff_ms, "initial retry backoff in ms");
  app.add_option("--timeout-ms", o.timeout_ms, "request timeout in ms");
}

void add_audit_options(CLI::App& app, Overrides& o) {
  app.add_option("--min-domains", o.min_domains,
                 "vocabulary filter: word must appear in this many domains");
  app.add_option("--features", o.features, "presence | counts");
  app.add_option("--zero-p-threshold", o.zero_p_threshold,
                 "p-values below this count as numerically zero");
  app.add_option("--top-k", o.top_k, "ranking list length");
}

RunConfig build_config(const Overrides& o) {
  RunConfig config;
  if (o.config_file) config = lexaudit::load_config_file(*o.config_file);

  auto set_path = [](std::filesystem::path& field, const std::optional<std::string>& v) {
    if (v) field = *v;
  };
  auto set_str = [](std::string& field, const std::optional<std::string>& v) {
    if (v) field = *v;
  };
  set_path(config.lexicon_path, o.lexicon);
  set_path(config.corpus_path, o.corpus);
  set_path(config.cache_path, o.cache);
  set_path(config.output_dir, o.output);
  set_str(config.provider, o.provider);
  set_path(config.stub_lexicon_path, o.stub_lexicon);
  set_path(config.stub_overrides_path, o.stub_overrides);
  if (o.stub_constant) config.stub_constant = *o.stub_constant;
  set_str(config.http.endpoint, o.endpoint);
  set_str(config.http.auth_header, o.auth_header);
  set_str(config.http.auth_env, o.auth_env);
  set_str(config.http.provider_name, o.provider_name);
  set_str(config.http.request_docs_field, o.request_docs_field);
  set_str(config.http.request_id_field, o.request_id_field);
  set_str(config.http.request_text_field, o.request_text_field);
  set_str(config.http.request_doc_extra, o.request_doc_extra);
  set_str(config.http.response_docs_field, o.response_docs_field);
  set_str(config.http.response_id_field, o.response_id_field);
  set_str(config.http.response_score_path, o.response_score_path);
  if (o.batch_size) config.http.batch_size = static_cast<std::size_t>(*o.batch_size);
  if (o.concurrency) config.http.concurrency = static_cast<std::size_t>(*o.concurrency);
  if (o.retries) config.http.retries = static_cast<std::size_t>(*o.retries);
  if (o.backoff_ms) config.http.backoff_start = std::chrono::milliseconds(*o.backoff_ms);
  if (o.timeout_ms) config.http.timeout = std::chrono::milliseconds(*o.timeout_ms);
  if (o.lens_low) config.lens_low = *o.lens_low;
  if (o.lens_high) config.lens_high = *o.lens_high;
  if (o.min_domains) config.min_domains = *o.min_domains;
  if (o.features) {
    if (*o.features == "presence") {
      config.features = lexaudit::FeatureMode::presence;
    } else if (*o.features == "counts") {
      config.features = lexaudit::FeatureMode::counts;
    } else {
      lexaudit::raise(lexaudit::Errc::config_error,
                      "--features must be presence or counts, got `" + *o.features + "`");
    }
  }
  if (o.zero_p_threshold) config.zero_p_threshold = *o.zero_p_threshold;
  if (o.top_k) config.top_k = *o.top_k;
  if (o.seed) config.seed = *o.seed;
  if (o.synth_docs) config.synth_docs = *o.synth_docs;
  if (o.synth_domains) {
    config.synth_domains.clear();
    std::string value = *o.synth_domains;
    std::size_t start = 0;
    while (start <= value.size()) {
      const auto comma = value.find(',', start);
      const std::string item =
          value.substr(start, comma == std::string::npos ? comma : comma - start);
      if (!item.empty()) config.synth_domains.push_back(item);
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
  }
  if (o.synth_vocab) config.synth_vocab = *o.synth_vocab;
  if (o.synth_words_min) config.synth_words_min = *o.synth_words_min;
  if (o.synth_words_max) config.synth_words_max = *o.synth_words_max;
  set_path(config.synth_output, o.synth_output);
  return config;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"lexicon sentiment audit toolkit"};
  app.require_subcommand(1);

  Overrides o;
  lexaudit::CorrelateOptions correlate;

  CLI::App* score = app.add_subcommand("score", "score every document and emit scores.csv");
  add_common_options(*score, o);
  add_provider_options(*score, o);

  CLI::App* coverage = app.add_subcommand("coverage", "lexicon coverage statistics per domain");
  add_common_options(*coverage, o);

  CLI::App* audit = app.add_subcommand(
      "audit", "full audit: scores, per-domain and pooled regressions, rankings, correlations");
  add_common_options(*audit, o);
  add_provider_options(*audit, o);
  add_audit_options(*audit, o);

  CLI::App* synth = app.add_subcommand("synth", "generate a deterministic synthetic corpus");
  add_common_options(*synth, o);
  synth->add_option("--docs", o.synth_docs, "number of documents");
  synth->add_option("--domains", o.synth_domains, "comma-separated domain tags");
  synth->add_option("--vocab", o.synth_vocab, "lexicon words to sample pools from");
  synth->add_option("--words-min", o.synth_words_min, "minimum tokens per document");
  synth->add_option("--words-max", o.synth_words_max, "maximum tokens per document");
  synth->add_option("--out", o.synth_output, "output corpus JSONL path");

  CLI::App* corr = app.add_subcommand("correlate", "Spearman correlation of two rank files");
  corr->add_option("file_a", correlate.file_a, "first file (CSV or TSV)")->required();
  corr->add_option("file_b", correlate.file_b, "second file (CSV or TSV)")->required();
  corr->add_option("--key-col-a", correlate.key_column_a, "key column (name or 0-based index)");
  corr->add_option("--value-col-a", correlate.value_column_a, "value column of file A");
  corr->add_option("--key-col-b", correlate.key_column_b, "key column of file B");
  corr->add_option("--value-col-b", correlate.value_column_b, "value column of file B");

  CLI11_PARSE(app, argc, argv);

  try {
    if (score->parsed()) return lexaudit::run_score(build_config(o));
    if (coverage->parsed()) return lexaudit::run_coverage(build_config(o));
    if (audit->parsed()) {
      const auto outcome = lexaudit::run_audit(build_config(o));
      for (const auto& scope : outcome.scopes) {
        std::cout << "scope " << scope.name << ": "
                  << (scope.failed ? "not analyzed" : "analyzed")
                  << (scope.degenerate && !scope.failed ? " (degenerate)" : "") << "\n";
      }
      return outcome.exit_code;
    }
    if (synth->parsed()) return lexaudit::run_synth(build_config(o));
    if (corr->parsed()) {
      const auto result = lexaudit::correlate_files(correlate);
      std::cout << "spearman_rho=" << lexaudit::format_double(result.rho)
                << " n_common=" << result.n_common << "\n";
      return lexaudit::kExitOk;
    }
  } catch (const lexaudit::Error& err) {
    std::cerr << "error: " << err.what() << "\n";
    return lexaudit::error_exit_code(err);
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << "\n";
    return lexaudit::kExitInputError;
  }
  return lexaudit::kExitInputError;
}
