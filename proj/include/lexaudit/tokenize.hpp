#pragma once

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace lexaudit {

// Bag-of-words counts for one document. Keys are normalized tokens.
struct TokenCounts {
  std::map<std::string, std::size_t> counts;
  std::size_t total = 0;

  bool operator==(const TokenCounts&) const = default;
};

// NFC normalization only; this is the form the score cache hashes.
std::string normalize_text(std::string_view utf8);

// Case fold + NFC. Lexicon words go through this so they compare byte-wise
// with tokenizer output.
std::string normalize_token(std::string_view utf8);

// Normalization, case folding, then splitting on every code point that is
// not a letter, digit, or apostrophe; apostrophes at token edges are
// stripped. U+2019 counts as an apostrophe. Deterministic across platforms;
// the golden tests pin the behaviour.
std::vector<std::string> tokenize(std::string_view utf8_text);

TokenCounts count_tokens(std::span<const std::string> tokens);
TokenCounts count_text(std::string_view utf8_text);  // tokenize + count

}  // namespace lexaudit
