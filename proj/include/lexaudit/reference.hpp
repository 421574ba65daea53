#pragma once

#include <chrono>
#include <cstddef>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "lexaudit/corpus.hpp"
#include "lexaudit/lexicon.hpp"

namespace lexaudit {

struct ReferenceScore {
  std::string doc_id;
  double score = 0;  // [0,1]
  std::string provider;
  std::string fetched_at;  // RFC 3339, UTC
};

// Anything that can score raw texts on [0,1]. Implementations do their own
// batching/concurrency; caching happens outside, in score_batch.
class ReferenceScorer {
 public:
  virtual ~ReferenceScorer() = default;
  virtual std::string_view provider_name() const = 0;
  // One score per text, order preserving.
  virtual std::vector<double> score_texts(const std::vector<std::string>& texts) = 0;
};

struct StubParams {
  const Lexicon* lexicon = nullptr;          // lexicon-echo, perturbed-lexicon
  std::map<std::string, double> overrides;   // perturbed-lexicon: word -> happiness
  double constant = 0.5;                     // constant
};

// kind is one of "lexicon-echo", "perturbed-lexicon", "constant".
std::unique_ptr<ReferenceScorer> stub_scorer(std::string_view kind, StubParams params);

struct ProviderConfig {
  std::string endpoint;     // e.g. https://host:port/path
  std::string auth_header;  // header name carrying the secret
  std::string auth_env;     // environment variable holding the secret
  std::string provider_name = "http";
  // request/response shape, so any JSON scoring API fits behind this
  std::string request_docs_field = "documents";
  std::string request_id_field = "id";
  std::string request_text_field = "text";
  std::string request_doc_extra;  // JSON object merged into each document entry
  std::string response_docs_field = "documents";
  std::string response_id_field = "id";
  std::string response_score_path = "confidenceScores.positive";  // dot path
  std::size_t batch_size = 10;
  std::size_t concurrency = 4;
  std::size_t retries = 3;
  std::chrono::milliseconds backoff_start{500};
  std::chrono::milliseconds timeout{30000};

  bool operator==(const ProviderConfig&) const = default;
};

std::unique_ptr<ReferenceScorer> http_scorer(ProviderConfig config);

// Append-only JSONL score cache keyed on (content hash, provider); reloading
// keeps the last entry per key. Malformed lines are skipped with a warning
// count so a torn tail write cannot poison a warm start.
class ScoreCache {
 public:
  explicit ScoreCache(std::filesystem::path file);

  struct Entry {
    double score;
    std::string fetched_at;
  };

  std::optional<Entry> lookup(std::string_view content_hash, std::string_view provider) const;
  void append(std::string_view content_hash, std::string_view provider, double score,
              std::string_view fetched_at);

  std::size_t size() const { return entries_.size(); }
  std::size_t skipped_lines() const { return skipped_lines_; }
  const std::filesystem::path& file() const { return file_; }

 private:
  std::filesystem::path file_;
  std::map<std::string, Entry> entries_;  // key = hash + '\x1f' + provider
  std::size_t skipped_lines_ = 0;
};

// Cache key hash: FNV-1a 64 of the NFC-normalized text, hex encoded.
std::string content_hash(std::string_view text);

// Scores every document, serving cached results without touching the scorer
// and appending fresh ones to the cache before returning. Order preserving:
// out[i].doc_id == docs[i].id. Scores outside [0,1] raise ScoreOutOfRange.
std::vector<ReferenceScore> score_batch(const Corpus& docs, ReferenceScorer& scorer,
                                        ScoreCache* cache);

}  // namespace lexaudit
