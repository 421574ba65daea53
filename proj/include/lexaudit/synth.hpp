#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "lexaudit/corpus.hpp"
#include "lexaudit/lexicon.hpp"

namespace lexaudit {

struct SynthParams {
  std::uint64_t seed = 42;
  std::uint64_t n_docs = 2000;
  std::vector<std::string> domains = {"finance", "news", "social", "reviews"};
  std::uint64_t vocab_size = 300;   // lexicon words to sample the pools from
  std::uint64_t words_min = 8;      // tokens per document, inclusive bounds
  std::uint64_t words_max = 30;
};

// Deterministic synthetic corpus: a seed-chosen vocabulary is split into
// overlapping per-domain pools (each word joins each domain with probability
// 3/4), then documents sample words from their domain's pool with
// replacement. Same seed, same corpus, byte for byte.
Corpus generate_corpus(const Lexicon& lexicon, const SynthParams& params);

}  // namespace lexaudit
