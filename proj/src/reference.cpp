#include "lexaudit/reference.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <limits>
#include <mutex>
#include <sstream>
#include <thread>

// CPPHTTPLIB_OPENSSL_SUPPORT comes from the build when OpenSSL is present,
// so https endpoints work.
#include <httplib.h>
#include <json.hpp>

#include "lexaudit/errors.hpp"
#include "lexaudit/scorer.hpp"
#include "lexaudit/tokenize.hpp"
#include "lexaudit/util.hpp"

namespace lexaudit {

namespace {

using nlohmann::json;

class LexiconEchoScorer final : public ReferenceScorer {
 public:
  LexiconEchoScorer(Lexicon lexicon, std::string name)
      : lexicon_(std::move(lexicon)), name_(std::move(name)) {}

  std::string_view provider_name() const override { return name_; }

  std::vector<double> score_texts(const std::vector<std::string>& texts) override {
    std::vector<double> scores;
    scores.reserve(texts.size());
    for (const auto& text : texts) {
      try {
        scores.push_back(score_document(text, lexicon_).unit);
      } catch (const Error& err) {
        if (err.code() != Errc::no_coverage) throw;
        scores.push_back(0.5);  // a real provider scores every text
      }
    }
    return scores;
  }

 private:
  Lexicon lexicon_;
  std::string name_;
};

class ConstantScorer final : public ReferenceScorer {
 public:
  explicit ConstantScorer(double value) : value_(value) {}
  std::string_view provider_name() const override { return "stub:constant"; }
  std::vector<double> score_texts(const std::vector<std::string>& texts) override {
    return std::vector<double>(texts.size(), value_);
  }

 private:
  double value_;
};

}  // namespace

std::unique_ptr<ReferenceScorer> stub_scorer(std::string_view kind, StubParams params) {
  if (kind == "constant") {
    if (!(params.constant >= 0.0 && params.constant <= 1.0)) {
      raise(Errc::out_of_range,
            "constant stub value " + format_double(params.constant) + " outside [0,1]");
    }
    return std::make_unique<ConstantScorer>(params.constant);
  }
  if (kind == "lexicon-echo" || kind == "perturbed-lexicon") {
    if (params.lexicon == nullptr) {
      raise(Errc::config_error, std::string(kind) + " stub needs a lexicon");
    }
    auto entries = params.lexicon->entries();
    if (kind == "perturbed-lexicon") {
      for (const auto& [word, happiness] : params.overrides) {
        if (!(happiness >= kHappinessMin && happiness <= kHappinessMax)) {
          raise(Errc::out_of_range,
                "override for `" + word + "` outside [1,9]: " + format_double(happiness));
        }
        entries[normalize_token(word)] = happiness;
      }
    }
    return std::make_unique<LexiconEchoScorer>(
        Lexicon(std::move(entries), params.lexicon->source_name()),
        "stub:" + std::string(kind));
  }
  raise(Errc::unknown_stub_kind, "unknown stub kind `" + std::string(kind) + "`");
}

// ---------------------------------------------------------------------------
// cache

namespace {

std::string cache_key(std::string_view hash, std::string_view provider) {
  std::string key(hash);
  key.push_back('\x1f');
  key.append(provider);
  return key;
}

}  // namespace

ScoreCache::ScoreCache(std::filesystem::path file) : file_(std::move(file)) {
  std::ifstream in(file_, std::ios::binary);
  if (!in) return;  // no cache yet
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    json object;
    try {
      object = json::parse(line);
      const auto hash = object.at("hash").get<std::string>();
      const auto provider = object.at("provider").get<std::string>();
      const auto score = object.at("score").get<double>();
      const auto fetched_at = object.value("fetched_at", std::string());
      entries_[cache_key(hash, provider)] = Entry{score, fetched_at};
    } catch (const json::exception&) {
      ++skipped_lines_;
    }
  }
  if (skipped_lines_ > 0) {
    std::cerr << "warning: skipped " << skipped_lines_ << " malformed cache line(s) in "
              << file_.string() << "\n";
  }
}

std::optional<ScoreCache::Entry> ScoreCache::lookup(std::string_view content_hash,
                                                    std::string_view provider) const {
  const auto it = entries_.find(cache_key(content_hash, provider));
  if (it == entries_.end()) return std::nullopt;
  return it->second;
}

void ScoreCache::append(std::string_view content_hash, std::string_view provider, double score,
                        std::string_view fetched_at) {
  json object;
  object["hash"] = std::string(content_hash);
  object["provider"] = std::string(provider);
  object["score"] = score;
  object["fetched_at"] = std::string(fetched_at);

  if (!file_.empty()) {
    if (file_.has_parent_path()) std::filesystem::create_directories(file_.parent_path());
    std::ofstream out(file_, std::ios::binary | std::ios::app);
    if (!out) raise(Errc::io_error, "cannot append to cache file: " + file_.string());
    out << object.dump() << '\n';
    out.flush();
    if (!out) raise(Errc::io_error, "cache write failed: " + file_.string());
  }
  entries_[cache_key(content_hash, provider)] =
      Entry{score, std::string(fetched_at)};
}

std::string content_hash(std::string_view text) { return fnv1a64_hex(normalize_text(text)); }

std::vector<ReferenceScore> score_batch(const Corpus& docs, ReferenceScorer& scorer,
                                        ScoreCache* cache) {
  const std::string provider(scorer.provider_name());
  std::vector<ReferenceScore> out(docs.size());
  std::vector<std::string> hashes(docs.size());

  // each distinct text is fetched once; documents sharing a hash share the
  // score, within this call and across runs
  std::vector<std::string> pending_texts;
  std::vector<std::string> pending_hashes;
  std::map<std::string, std::size_t> pending_by_hash;  // hash -> pending index
  std::vector<std::size_t> uncached_docs;

  for (std::size_t i = 0; i < docs.size(); ++i) {
    hashes[i] = content_hash(docs[i].text);
    out[i].doc_id = docs[i].id;
    out[i].provider = provider;
    if (cache != nullptr) {
      if (const auto hit = cache->lookup(hashes[i], provider)) {
        out[i].score = hit->score;
        out[i].fetched_at = hit->fetched_at;
        continue;
      }
    }
    uncached_docs.push_back(i);
    if (pending_by_hash.emplace(hashes[i], pending_texts.size()).second) {
      pending_texts.push_back(docs[i].text);
      pending_hashes.push_back(hashes[i]);
    }
  }

  if (!pending_texts.empty()) {
    const auto scores = scorer.score_texts(pending_texts);
    if (scores.size() != pending_texts.size()) {
      raise(Errc::provider_error, "provider returned " + std::to_string(scores.size()) +
                                      " scores for " + std::to_string(pending_texts.size()) +
                                      " texts");
    }
    const std::string fetched_at = utc_now_rfc3339();
    for (std::size_t k = 0; k < pending_texts.size(); ++k) {
      const double score = scores[k];
      if (!(score >= 0.0 && score <= 1.0)) {
        raise(Errc::score_out_of_range, "provider `" + provider + "` returned " +
                                            format_double(score) + " (outside [0,1])");
      }
      if (cache != nullptr) cache->append(pending_hashes[k], provider, score, fetched_at);
    }
    for (const std::size_t i : uncached_docs) {
      out[i].score = scores[pending_by_hash.at(hashes[i])];
      out[i].fetched_at = fetched_at;
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// HTTP provider

namespace {

struct ParsedUrl {
  std::string scheme_host_port;  // httplib client target
  std::string path;
};

ParsedUrl parse_url(const std::string& endpoint) {
  const auto scheme_end = endpoint.find("://");
  if (scheme_end == std::string::npos) {
    raise(Errc::config_error, "endpoint must include a scheme: " + endpoint);
  }
  const auto path_start = endpoint.find('/', scheme_end + 3);
  if (path_start == std::string::npos) return {endpoint, "/"};
  return {endpoint.substr(0, path_start), endpoint.substr(path_start)};
}

const json* resolve_dot_path(const json& node, std::string_view path) {
  const json* current = &node;
  std::size_t start = 0;
  while (start <= path.size()) {
    const auto dot = path.find('.', start);
    const std::string key(path.substr(start, dot == std::string_view::npos ? dot : dot - start));
    if (!key.empty()) {
      if (!current->is_object()) return nullptr;
      const auto it = current->find(key);
      if (it == current->end()) return nullptr;
      current = &*it;
    }
    if (dot == std::string_view::npos) break;
    start = dot + 1;
  }
  return current;
}

class HttpScorer final : public ReferenceScorer {
 public:
  explicit HttpScorer(ProviderConfig config) : config_(std::move(config)) {
    if (config_.endpoint.empty()) raise(Errc::config_error, "http provider needs an endpoint");
    if (config_.batch_size == 0) raise(Errc::config_error, "batch_size must be >= 1");
    if (!config_.request_doc_extra.empty()) {
      try {
        doc_extra_ = json::parse(config_.request_doc_extra);
      } catch (const json::exception& ex) {
        raise(Errc::config_error, std::string("request_doc_extra is not valid JSON: ") + ex.what());
      }
      if (!doc_extra_.is_object()) {
        raise(Errc::config_error, "request_doc_extra must be a JSON object");
      }
    }
  }

  std::string_view provider_name() const override { return config_.provider_name; }

  std::vector<double> score_texts(const std::vector<std::string>& texts) override;

 private:
  std::vector<double> score_one_batch(const std::vector<std::string>& texts,
                                      std::size_t offset, std::size_t count) const;

  ProviderConfig config_;
  json doc_extra_ = json::object();
};

}  // namespace

std::unique_ptr<ReferenceScorer> http_scorer(ProviderConfig config) {
  return std::make_unique<HttpScorer>(std::move(config));
}

namespace {

bool retryable_status(int status) {
  return status == 408 || status == 429 || (status >= 500 && status < 600);
}

std::vector<double> parse_batch_response(const std::string& body, const ProviderConfig& config,
                                         std::size_t expected) {
  json parsed;
  try {
    parsed = json::parse(body);
  } catch (const json::exception& ex) {
    raise(Errc::provider_error, std::string("response is not JSON: ") + ex.what());
  }
  const json* docs = resolve_dot_path(parsed, config.response_docs_field);
  if (docs == nullptr || !docs->is_array()) {
    raise(Errc::provider_error,
          "response field `" + config.response_docs_field + "` missing or not an array");
  }
  std::vector<double> scores(expected, std::numeric_limits<double>::quiet_NaN());
  std::vector<bool> seen(expected, false);
  for (const auto& doc : *docs) {
    const json* id_node = resolve_dot_path(doc, config.response_id_field);
    if (id_node == nullptr || !id_node->is_string()) {
      raise(Errc::provider_error, "response document lacks id field `" +
                                      config.response_id_field + "`");
    }
    const auto index = parse_uint(id_node->get<std::string>());
    if (!index || *index >= expected) {
      raise(Errc::provider_error, "response id `" + id_node->get<std::string>() +
                                      "` does not match a request document");
    }
    const json* score_node = resolve_dot_path(doc, config.response_score_path);
    if (score_node == nullptr || !score_node->is_number()) {
      raise(Errc::provider_error,
            "response score path `" + config.response_score_path + "` missing or not numeric");
    }
    scores[*index] = score_node->get<double>();
    seen[*index] = true;
  }
  for (std::size_t i = 0; i < expected; ++i) {
    if (!seen[i]) {
      raise(Errc::provider_error, "response missing document " + std::to_string(i));
    }
  }
  return scores;
}

}  // namespace

std::vector<double> HttpScorer::score_one_batch(const std::vector<std::string>& texts,
                                                std::size_t offset, std::size_t count) const {
  json request;
  json docs = json::array();
  for (std::size_t i = 0; i < count; ++i) {
    json doc = doc_extra_;
    doc[config_.request_id_field] = std::to_string(i);
    doc[config_.request_text_field] = texts[offset + i];
    docs.push_back(std::move(doc));
  }
  request[config_.request_docs_field] = std::move(docs);
  const std::string body = request.dump();

  const ParsedUrl url = parse_url(config_.endpoint);
  httplib::Client client(url.scheme_host_port);
  const auto timeout_s = std::chrono::duration_cast<std::chrono::seconds>(config_.timeout);
  client.set_connection_timeout(std::max<long>(1, timeout_s.count()), 0);
  client.set_read_timeout(std::max<long>(1, timeout_s.count()), 0);

  httplib::Headers headers;
  if (!config_.auth_header.empty()) {
    const char* secret = config_.auth_env.empty() ? nullptr : std::getenv(config_.auth_env.c_str());
    if (secret == nullptr) {
      raise(Errc::provider_error,
            "auth environment variable `" + config_.auth_env + "` is not set");
    }
    headers.emplace(config_.auth_header, secret);
  }

  std::chrono::milliseconds backoff = config_.backoff_start;
  std::size_t timeouts = 0;
  std::string last_failure = "no attempt made";
  for (std::size_t attempt = 0; attempt <= config_.retries; ++attempt) {
    if (attempt > 0) {
      std::this_thread::sleep_for(backoff);
      backoff *= 2;
    }
    auto response = client.Post(url.path, headers, body, "application/json");
    if (!response) {
      ++timeouts;
      last_failure = "transport error: " + httplib::to_string(response.error());
      continue;  // connection-level failures are retryable
    }
    if (response->status == 200) {
      return parse_batch_response(response->body, config_, count);
    }
    if (retryable_status(response->status)) {
      last_failure = "HTTP " + std::to_string(response->status);
      continue;
    }
    raise(Errc::provider_error, "HTTP " + std::to_string(response->status) + " from " +
                                    config_.endpoint + ": " + response->body.substr(0, 200));
  }
  const Errc code = timeouts > 0 ? Errc::timeout : Errc::provider_error;
  raise(code, "gave up after " + std::to_string(config_.retries + 1) + " attempts (" +
                  last_failure + ")");
}

std::vector<double> HttpScorer::score_texts(const std::vector<std::string>& texts) {
  const std::size_t n = texts.size();
  std::vector<double> scores(n);
  const std::size_t batch_count = (n + config_.batch_size - 1) / config_.batch_size;
  const std::size_t workers = std::max<std::size_t>(
      1, std::min({config_.concurrency, batch_count, std::size_t(64)}));

  std::mutex mutex;
  std::size_t next_batch = 0;
  std::exception_ptr failure;

  auto run = [&]() {
    while (true) {
      std::size_t batch;
      {
        std::lock_guard lock(mutex);
        if (failure || next_batch >= batch_count) return;
        batch = next_batch++;
      }
      const std::size_t offset = batch * config_.batch_size;
      const std::size_t count = std::min(config_.batch_size, n - offset);
      try {
        const auto batch_scores = score_one_batch(texts, offset, count);
        std::lock_guard lock(mutex);
        std::copy(batch_scores.begin(), batch_scores.end(),
                  scores.begin() + static_cast<std::ptrdiff_t>(offset));
      } catch (...) {
        std::lock_guard lock(mutex);
        if (!failure) failure = std::current_exception();
        return;
      }
    }
  };

  if (workers == 1) {
    run();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(run);
    for (auto& thread : pool) thread.join();
  }
  if (failure) std::rethrow_exception(failure);
  return scores;
}

}  // namespace lexaudit
