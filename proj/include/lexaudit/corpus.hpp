#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "lexaudit/lexicon.hpp"

namespace lexaudit {

struct Document {
  std::string id;
  std::string domain;
  std::string text;

  bool operator==(const Document&) const = default;
};

using Corpus = std::vector<Document>;

// JSON Lines, one {"id":..., "domain":..., "text":...} object per line.
Corpus load_corpus(std::istream& in, const std::string& source_name = "corpus");
Corpus load_corpus_file(const std::filesystem::path& path);

void write_corpus(std::ostream& out, const Corpus& corpus);

struct CoverageStats {
  // domain -> distinct lexicon words appearing in that domain's texts
  std::map<std::string, std::size_t> per_domain;
  // k -> number of lexicon words appearing in exactly k domains, k = 1..D
  std::map<std::size_t, std::size_t> overlap;
  std::size_t total_distinct = 0;
};

CoverageStats coverage_stats(const Corpus& corpus, const Lexicon& lexicon);

// Lexicon words appearing in at least min_domains distinct domains,
// lexicographically sorted. The design-matrix column order comes from this.
std::vector<std::string> select_vocabulary(const Corpus& corpus, const Lexicon& lexicon,
                                           std::size_t min_domains);

}  // namespace lexaudit
