#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <string_view>

namespace lexaudit {

inline constexpr double kHappinessMin = 1.0;
inline constexpr double kHappinessMax = 9.0;

struct LexiconEntry {
  std::string word;   // normalized, case-folded, no whitespace
  double happiness;   // 1 (sad) .. 9 (happy)
};

// Immutable after load; safe to share across threads.
class Lexicon {
 public:
  Lexicon() = default;
  Lexicon(std::map<std::string, double> entries, std::string source_name);

  const std::map<std::string, double>& entries() const { return entries_; }
  const std::string& source_name() const { return source_name_; }
  std::size_t size() const { return entries_.size(); }

  // nullptr when the word is not in the lexicon.
  const double* find(std::string_view word) const;

 private:
  std::map<std::string, double> entries_;
  std::string source_name_;
};

struct LexiconLoad {
  Lexicon lexicon;
  std::size_t duplicate_overwrites = 0;  // lines that replaced an earlier word
};

// Tab-separated `word<TAB>score` lines, optional header line, LF endings.
// Duplicate words keep the last occurrence and bump duplicate_overwrites.
LexiconLoad load_lexicon(std::istream& in, std::string source_name = "lexicon");
LexiconLoad load_lexicon_file(const std::filesystem::path& path);

// Same format back out, entries in key order; load(write(lex)) == lex.
void write_lexicon(std::ostream& out, const Lexicon& lexicon);

// Affine map of the 1..9 happiness scale onto [0,1].
double unit_rescale(double happiness);

// Removes entries whose happiness lies strictly inside (exclude_low,
// exclude_high); the input lexicon is untouched.
Lexicon apply_lens(const Lexicon& lexicon, double exclude_low, double exclude_high);

}  // namespace lexaudit
