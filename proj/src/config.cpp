#include "lexaudit/config.hpp"

#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "lexaudit/errors.hpp"
#include "lexaudit/util.hpp"

namespace lexaudit {

namespace {

std::string trim(std::string_view text) {
  std::size_t begin = text.find_first_not_of(" \t");
  if (begin == std::string_view::npos) return {};
  std::size_t end = text.find_last_not_of(" \t");
  return std::string(text.substr(begin, end - begin + 1));
}

std::vector<std::string> split_list(const std::string& value) {
  std::vector<std::string> items;
  std::size_t start = 0;
  while (start <= value.size()) {
    const auto comma = value.find(',', start);
    const std::string item =
        trim(value.substr(start, comma == std::string::npos ? comma : comma - start));
    if (!item.empty()) items.push_back(item);
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return items;
}

std::string join_list(const std::vector<std::string>& items) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i > 0) out.push_back(',');
    out += items[i];
  }
  return out;
}

using Setter = std::function<void(RunConfig&, const std::string&)>;

void set_double(double& field, const std::string& value, const std::string& key) {
  const auto parsed = parse_double(value);
  if (!parsed) raise(Errc::config_error, "key `" + key + "`: expected a number, got `" + value + "`");
  field = *parsed;
}

void set_uint(std::uint64_t& field, const std::string& value, const std::string& key) {
  const auto parsed = parse_uint(value);
  if (!parsed) raise(Errc::config_error, "key `" + key + "`: expected an integer, got `" + value + "`");
  field = *parsed;
}

void set_size(std::size_t& field, const std::string& value, const std::string& key) {
  std::uint64_t v = 0;
  set_uint(v, value, key);
  field = static_cast<std::size_t>(v);
}

void set_optional_double(std::optional<double>& field, const std::string& value,
                         const std::string& key) {
  if (value.empty()) {
    field.reset();
    return;
  }
  double v = 0;
  set_double(v, value, key);
  field = v;
}

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table = {
      {"lexicon", [](RunConfig& c, const std::string& v) { c.lexicon_path = v; }},
      {"corpus", [](RunConfig& c, const std::string& v) { c.corpus_path = v; }},
      {"cache", [](RunConfig& c, const std::string& v) { c.cache_path = v; }},
      {"output", [](RunConfig& c, const std::string& v) { c.output_dir = v; }},
      {"provider", [](RunConfig& c, const std::string& v) { c.provider = v; }},
      {"stub_lexicon", [](RunConfig& c, const std::string& v) { c.stub_lexicon_path = v; }},
      {"stub_overrides", [](RunConfig& c, const std::string& v) { c.stub_overrides_path = v; }},
      {"stub_constant",
       [](RunConfig& c, const std::string& v) { set_double(c.stub_constant, v, "stub_constant"); }},
      {"endpoint", [](RunConfig& c, const std::string& v) { c.http.endpoint = v; }},
      {"auth_header", [](RunConfig& c, const std::string& v) { c.http.auth_header = v; }},
      {"auth_env", [](RunConfig& c, const std::string& v) { c.http.auth_env = v; }},
      {"provider_name", [](RunConfig& c, const std::string& v) { c.http.provider_name = v; }},
      {"request_docs_field",
       [](RunConfig& c, const std::string& v) { c.http.request_docs_field = v; }},
      {"request_id_field",
       [](RunConfig& c, const std::string& v) { c.http.request_id_field = v; }},
      {"request_text_field",
       [](RunConfig& c, const std::string& v) { c.http.request_text_field = v; }},
      {"request_doc_extra",
       [](RunConfig& c, const std::string& v) { c.http.request_doc_extra = v; }},
      {"response_docs_field",
       [](RunConfig& c, const std::string& v) { c.http.response_docs_field = v; }},
      {"response_id_field",
       [](RunConfig& c, const std::string& v) { c.http.response_id_field = v; }},
      {"response_score_path",
       [](RunConfig& c, const std::string& v) { c.http.response_score_path = v; }},
      {"batch_size",
       [](RunConfig& c, const std::string& v) { set_size(c.http.batch_size, v, "batch_size"); }},
      {"concurrency",
       [](RunConfig& c, const std::string& v) { set_size(c.http.concurrency, v, "concurrency"); }},
      {"retries",
       [](RunConfig& c, const std::string& v) { set_size(c.http.retries, v, "retries"); }},
      {"backoff_ms",
       [](RunConfig& c, const std::string& v) {
         std::uint64_t ms = 0;
         set_uint(ms, v, "backoff_ms");
         c.http.backoff_start = std::chrono::milliseconds(ms);
       }},
      {"timeout_ms",
       [](RunConfig& c, const std::string& v) {
         std::uint64_t ms = 0;
         set_uint(ms, v, "timeout_ms");
         c.http.timeout = std::chrono::milliseconds(ms);
       }},
      {"lens_low",
       [](RunConfig& c, const std::string& v) { set_optional_double(c.lens_low, v, "lens_low"); }},
      {"lens_high",
       [](RunConfig& c, const std::string& v) { set_optional_double(c.lens_high, v, "lens_high"); }},
      {"min_domains",
       [](RunConfig& c, const std::string& v) { set_uint(c.min_domains, v, "min_domains"); }},
      {"features",
       [](RunConfig& c, const std::string& v) {
         if (v == "presence") {
           c.features = FeatureMode::presence;
         } else if (v == "counts") {
           c.features = FeatureMode::counts;
         } else {
           raise(Errc::config_error, "features must be `presence` or `counts`, got `" + v + "`");
         }
       }},
      {"zero_p_threshold",
       [](RunConfig& c, const std::string& v) {
         set_double(c.zero_p_threshold, v, "zero_p_threshold");
       }},
      {"top_k", [](RunConfig& c, const std::string& v) { set_uint(c.top_k, v, "top_k"); }},
      {"seed", [](RunConfig& c, const std::string& v) { set_uint(c.seed, v, "seed"); }},
      {"synth_docs",
       [](RunConfig& c, const std::string& v) { set_uint(c.synth_docs, v, "synth_docs"); }},
      {"synth_domains",
       [](RunConfig& c, const std::string& v) { c.synth_domains = split_list(v); }},
      {"synth_vocab",
       [](RunConfig& c, const std::string& v) { set_uint(c.synth_vocab, v, "synth_vocab"); }},
      {"synth_words_min",
       [](RunConfig& c, const std::string& v) { set_uint(c.synth_words_min, v, "synth_words_min"); }},
      {"synth_words_max",
       [](RunConfig& c, const std::string& v) { set_uint(c.synth_words_max, v, "synth_words_max"); }},
      {"synth_output", [](RunConfig& c, const std::string& v) { c.synth_output = v; }},
  };
  return table;
}

}  // namespace

RunConfig parse_config(std::istream& in, const std::string& source_name) {
  RunConfig config;
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const std::string trimmed = trim(line);
    if (trimmed.empty() || trimmed.front() == '#') continue;
    const auto equals = trimmed.find('=');
    if (equals == std::string::npos) {
      raise(Errc::config_error, source_name + " line " + std::to_string(line_number) +
                                    ": expected `key = value`");
    }
    const std::string key = trim(trimmed.substr(0, equals));
    const std::string value = trim(trimmed.substr(equals + 1));
    const auto it = setters().find(key);
    if (it == setters().end()) {
      raise(Errc::config_error,
            source_name + " line " + std::to_string(line_number) + ": unknown key `" + key + "`");
    }
    it->second(config, value);
  }
  return config;
}

RunConfig load_config_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) raise(Errc::io_error, "cannot open config file: " + path.string());
  return parse_config(in, path.filename().string());
}

std::string feature_mode_name(FeatureMode mode) {
  return mode == FeatureMode::presence ? "presence" : "counts";
}

std::string write_config(const RunConfig& c) {
  std::ostringstream out;
  out << "lexicon = " << c.lexicon_path.string() << '\n';
  out << "corpus = " << c.corpus_path.string() << '\n';
  out << "cache = " << c.cache_path.string() << '\n';
  out << "output = " << c.output_dir.string() << '\n';
  out << "provider = " << c.provider << '\n';
  out << "stub_lexicon = " << c.stub_lexicon_path.string() << '\n';
  out << "stub_overrides = " << c.stub_overrides_path.string() << '\n';
  out << "stub_constant = " << format_double(c.stub_constant) << '\n';
  out << "endpoint = " << c.http.endpoint << '\n';
  out << "auth_header = " << c.http.auth_header << '\n';
  out << "auth_env = " << c.http.auth_env << '\n';
  out << "provider_name = " << c.http.provider_name << '\n';
  out << "request_docs_field = " << c.http.request_docs_field << '\n';
  out << "request_id_field = " << c.http.request_id_field << '\n';
  out << "request_text_field = " << c.http.request_text_field << '\n';
  out << "request_doc_extra = " << c.http.request_doc_extra << '\n';
  out << "response_docs_field = " << c.http.response_docs_field << '\n';
  out << "response_id_field = " << c.http.response_id_field << '\n';
  out << "response_score_path = " << c.http.response_score_path << '\n';
  out << "batch_size = " << c.http.batch_size << '\n';
  out << "concurrency = " << c.http.concurrency << '\n';
  out << "retries = " << c.http.retries << '\n';
  out << "backoff_ms = " << c.http.backoff_start.count() << '\n';
  out << "timeout_ms = " << c.http.timeout.count() << '\n';
  out << "lens_low = " << (c.lens_low ? format_double(*c.lens_low) : std::string()) << '\n';
  out << "lens_high = " << (c.lens_high ? format_double(*c.lens_high) : std::string()) << '\n';
  out << "min_domains = " << c.min_domains << '\n';
  out << "features = " << feature_mode_name(c.features) << '\n';
  out << "zero_p_threshold = " << format_double(c.zero_p_threshold) << '\n';
  out << "top_k = " << c.top_k << '\n';
  out << "seed = " << c.seed << '\n';
  out << "synth_docs = " << c.synth_docs << '\n';
  out << "synth_domains = " << join_list(c.synth_domains) << '\n';
  out << "synth_vocab = " << c.synth_vocab << '\n';
  out << "synth_words_min = " << c.synth_words_min << '\n';
  out << "synth_words_max = " << c.synth_words_max << '\n';
  out << "synth_output = " << c.synth_output.string() << '\n';
  return out.str();
}

}  // namespace lexaudit
