#include "lexaudit/corpus.hpp"

#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <unordered_set>

#include <json.hpp>

#include "lexaudit/errors.hpp"
#include "lexaudit/tokenize.hpp"

namespace lexaudit {

namespace {

using nlohmann::json;

std::string require_string_field(const json& object, const char* field, std::size_t line_number,
                                 const std::string& source_name) {
  const auto it = object.find(field);
  if (it == object.end() || !it->is_string()) {
    raise(Errc::malformed_line, "line " + std::to_string(line_number) + ": missing string field `" +
                                    field + "` in " + source_name);
  }
  return it->get<std::string>();
}

}  // namespace

Corpus load_corpus(std::istream& in, const std::string& source_name) {
  Corpus corpus;
  std::unordered_set<std::string> seen_ids;
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    json object;
    try {
      object = json::parse(line);  // also rejects invalid UTF-8
    } catch (const json::exception& ex) {
      raise(Errc::malformed_line,
            "line " + std::to_string(line_number) + ": " + ex.what() + " in " + source_name);
    }
    if (!object.is_object()) {
      raise(Errc::malformed_line,
            "line " + std::to_string(line_number) + ": expected a JSON object in " + source_name);
    }
    Document doc;
    doc.id = require_string_field(object, "id", line_number, source_name);
    doc.domain = require_string_field(object, "domain", line_number, source_name);
    doc.text = require_string_field(object, "text", line_number, source_name);
    if (doc.id.empty() || doc.domain.empty()) {
      raise(Errc::malformed_line,
            "line " + std::to_string(line_number) + ": id and domain must be non-empty in " +
                source_name);
    }
    if (!seen_ids.insert(doc.id).second) {
      raise(Errc::duplicate_id, "duplicate document id `" + doc.id + "` at line " +
                                    std::to_string(line_number) + " in " + source_name);
    }
    corpus.push_back(std::move(doc));
  }
  if (corpus.empty()) raise(Errc::empty_corpus, "no documents loaded from " + source_name);
  return corpus;
}

Corpus load_corpus_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) raise(Errc::io_error, "cannot open corpus file: " + path.string());
  return load_corpus(in, path.filename().string());
}

void write_corpus(std::ostream& out, const Corpus& corpus) {
  for (const auto& doc : corpus) {
    json object;
    object["id"] = doc.id;
    object["domain"] = doc.domain;
    object["text"] = doc.text;
    out << object.dump() << '\n';
  }
}

CoverageStats coverage_stats(const Corpus& corpus, const Lexicon& lexicon) {
  if (corpus.empty()) raise(Errc::empty_corpus, "coverage_stats requires a non-empty corpus");

  std::map<std::string, std::set<std::string>> words_by_domain;
  for (const auto& doc : corpus) {
    auto& words = words_by_domain[doc.domain];
    for (const auto& token : tokenize(doc.text)) {
      if (lexicon.find(token) != nullptr) words.insert(token);
    }
  }

  CoverageStats stats;
  std::map<std::string, std::size_t> domains_per_word;
  for (const auto& [domain, words] : words_by_domain) {
    stats.per_domain[domain] = words.size();
    for (const auto& word : words) ++domains_per_word[word];
  }
  const std::size_t domain_count = words_by_domain.size();
  for (std::size_t k = 1; k <= domain_count; ++k) stats.overlap[k] = 0;
  for (const auto& [word, k] : domains_per_word) ++stats.overlap[k];
  stats.total_distinct = domains_per_word.size();
  return stats;
}

std::vector<std::string> select_vocabulary(const Corpus& corpus, const Lexicon& lexicon,
                                           std::size_t min_domains) {
  if (corpus.empty()) raise(Errc::empty_corpus, "select_vocabulary requires a non-empty corpus");

  std::map<std::string, std::set<std::string>> domains_per_word;
  std::set<std::string> domains;
  for (const auto& doc : corpus) {
    domains.insert(doc.domain);
    for (const auto& token : tokenize(doc.text)) {
      if (lexicon.find(token) != nullptr) domains_per_word[token].insert(doc.domain);
    }
  }
  if (min_domains < 1 || min_domains > domains.size()) {
    raise(Errc::out_of_range, "min_domains must be in [1, " + std::to_string(domains.size()) +
                                  "], got " + std::to_string(min_domains));
  }

  std::vector<std::string> vocabulary;
  for (const auto& [word, in_domains] : domains_per_word) {
    if (in_domains.size() >= min_domains) vocabulary.push_back(word);
  }
  if (vocabulary.empty()) {
    raise(Errc::empty_vocabulary,
          "no lexicon word appears in >= " + std::to_string(min_domains) + " domains");
  }
  return vocabulary;  // std::map iteration is already lexicographic
}

}  // namespace lexaudit
