#include "lexaudit/tokenize.hpp"

#include <unicode/normalizer2.h>
#include <unicode/uchar.h>
#include <unicode/unistr.h>

#include "lexaudit/errors.hpp"

namespace lexaudit {

namespace {

const icu::Normalizer2& nfc() {
  UErrorCode status = U_ZERO_ERROR;
  const icu::Normalizer2* instance = icu::Normalizer2::getNFCInstance(status);
  if (U_FAILURE(status) || instance == nullptr)
    raise(Errc::io_error, "ICU NFC normalizer unavailable");
  return *instance;
}

icu::UnicodeString to_nfc(const icu::UnicodeString& text) {
  UErrorCode status = U_ZERO_ERROR;
  icu::UnicodeString out = nfc().normalize(text, status);
  if (U_FAILURE(status)) raise(Errc::io_error, "ICU normalization failed");
  return out;
}

constexpr UChar32 kApostrophe = 0x27;
constexpr UChar32 kRightSingleQuote = 0x2019;

bool is_token_char(UChar32 cp) {
  return cp == kApostrophe || u_isalpha(cp) || u_isdigit(cp);
}

}  // namespace

std::string normalize_text(std::string_view utf8) {
  const icu::UnicodeString text =
      icu::UnicodeString::fromUTF8(icu::StringPiece(utf8.data(), static_cast<int>(utf8.size())));
  std::string out;
  to_nfc(text).toUTF8String(out);
  return out;
}

std::string normalize_token(std::string_view utf8) {
  icu::UnicodeString text =
      icu::UnicodeString::fromUTF8(icu::StringPiece(utf8.data(), static_cast<int>(utf8.size())));
  text.foldCase(U_FOLD_CASE_DEFAULT);
  std::string out;
  to_nfc(text).toUTF8String(out);
  return out;
}

std::vector<std::string> tokenize(std::string_view utf8_text) {
  icu::UnicodeString text = icu::UnicodeString::fromUTF8(
      icu::StringPiece(utf8_text.data(), static_cast<int>(utf8_text.size())));
  text.foldCase(U_FOLD_CASE_DEFAULT);
  text = to_nfc(text);

  std::vector<std::string> tokens;
  icu::UnicodeString current;
  auto flush = [&]() {
    if (current.isEmpty()) return;
    // strip apostrophes at the edges
    int32_t begin = 0;
    int32_t end = current.length();
    while (begin < end && current.char32At(begin) == kApostrophe) ++begin;
    while (end > begin && current.char32At(end - 1) == kApostrophe) --end;
    if (end > begin) {
      std::string utf8;
      current.tempSubStringBetween(begin, end).toUTF8String(utf8);
      tokens.push_back(std::move(utf8));
    }
    current.remove();
  };

  for (int32_t i = 0; i < text.length();) {
    UChar32 cp = text.char32At(i);
    i += U16_LENGTH(cp);
    if (cp == kRightSingleQuote) cp = kApostrophe;
    if (is_token_char(cp)) {
      current.append(cp);
    } else {
      flush();
    }
  }
  flush();
  return tokens;
}

TokenCounts count_tokens(std::span<const std::string> tokens) {
  TokenCounts counts;
  for (const auto& token : tokens) {
    ++counts.counts[token];
  }
  counts.total = tokens.size();
  return counts;
}

TokenCounts count_text(std::string_view utf8_text) {
  const auto tokens = tokenize(utf8_text);
  return count_tokens(tokens);
}

}  // namespace lexaudit
