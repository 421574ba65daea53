#include "lexaudit/synth.hpp"

#include <algorithm>
#include <cstdio>
#include <random>

#include "lexaudit/errors.hpp"
#include "lexaudit/util.hpp"

namespace lexaudit {

Corpus generate_corpus(const Lexicon& lexicon, const SynthParams& params) {
  if (params.domains.empty()) raise(Errc::config_error, "synth needs at least one domain");
  if (params.words_min < 1 || params.words_min > params.words_max) {
    raise(Errc::config_error, "synth needs 1 <= words_min <= words_max");
  }

  std::mt19937_64 rng(params.seed);

  std::vector<std::string> words;
  words.reserve(lexicon.size());
  for (const auto& [word, happiness] : lexicon.entries()) words.push_back(word);

  // partial Fisher-Yates picks the vocabulary without replacement
  const std::size_t vocab_size =
      std::min<std::size_t>(static_cast<std::size_t>(params.vocab_size), words.size());
  if (vocab_size == 0) raise(Errc::config_error, "synth vocabulary is empty");
  for (std::size_t i = 0; i < vocab_size; ++i) {
    const std::size_t j = i + static_cast<std::size_t>(draw_below(rng, words.size() - i));
    std::swap(words[i], words[j]);
  }
  words.resize(vocab_size);
  std::sort(words.begin(), words.end());

  const std::size_t n_domains = params.domains.size();
  std::vector<std::vector<std::string>> pools(n_domains);
  for (const auto& word : words) {
    bool assigned = false;
    for (std::size_t d = 0; d < n_domains; ++d) {
      if (draw_unit(rng) < 0.75) {
        pools[d].push_back(word);
        assigned = true;
      }
    }
    if (!assigned) {
      pools[static_cast<std::size_t>(draw_below(rng, n_domains))].push_back(word);
    }
  }
  for (std::size_t d = 0; d < n_domains; ++d) {
    if (pools[d].empty()) {
      pools[d].push_back(words[static_cast<std::size_t>(draw_below(rng, words.size()))]);
    }
  }

  Corpus corpus;
  corpus.reserve(params.n_docs);
  char id_buf[32];
  for (std::uint64_t i = 0; i < params.n_docs; ++i) {
    const std::size_t d = static_cast<std::size_t>(i % n_domains);  // even split by round-robin
    const auto& pool = pools[d];
    const std::uint64_t length =
        params.words_min + draw_below(rng, params.words_max - params.words_min + 1);
    std::string text;
    for (std::uint64_t w = 0; w < length; ++w) {
      if (w > 0) text.push_back(' ');
      text += pool[static_cast<std::size_t>(draw_below(rng, pool.size()))];
    }
    std::snprintf(id_buf, sizeof(id_buf), "synth-%06llu", static_cast<unsigned long long>(i));
    corpus.push_back(Document{id_buf, params.domains[d], std::move(text)});
  }
  return corpus;
}

}  // namespace lexaudit
