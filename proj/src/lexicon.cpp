#include "lexaudit/lexicon.hpp"

#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "lexaudit/errors.hpp"
#include "lexaudit/tokenize.hpp"
#include "lexaudit/util.hpp"

namespace lexaudit {

namespace {

bool has_whitespace(std::string_view word) {
  for (const char ch : word) {
    const unsigned char c = static_cast<unsigned char>(ch);
    if (c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\v' || c == '\f') return true;
  }
  return false;
}

void check_happiness_range(double happiness, std::size_t line_number) {
  if (!(happiness >= kHappinessMin && happiness <= kHappinessMax)) {
    raise(Errc::out_of_range, "line " + std::to_string(line_number) + ": score " +
                                  format_double(happiness) + " outside [1,9]");
  }
}

}  // namespace

Lexicon::Lexicon(std::map<std::string, double> entries, std::string source_name)
    : entries_(std::move(entries)), source_name_(std::move(source_name)) {}

const double* Lexicon::find(std::string_view word) const {
  const auto it = entries_.find(std::string(word));
  if (it == entries_.end()) return nullptr;
  return &it->second;
}

LexiconLoad load_lexicon(std::istream& in, std::string source_name) {
  std::map<std::string, double> entries;
  std::size_t duplicates = 0;
  std::size_t line_number = 0;
  bool first_content_line = true;
  std::string line;
  while (std::getline(in, line)) {
    ++line_number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (!is_valid_utf8(line)) {
      raise(Errc::malformed_line,
            "line " + std::to_string(line_number) + ": invalid UTF-8 in " + source_name);
    }

    const std::size_t tab = line.find('\t');
    const std::string_view word_field =
        tab == std::string::npos ? std::string_view(line) : std::string_view(line).substr(0, tab);
    const std::string_view score_field =
        tab == std::string::npos ? std::string_view() : std::string_view(line).substr(tab + 1);

    if (first_content_line) {
      first_content_line = false;
      // header line: first field is literally "word" and the second is not a score
      if (word_field == "word" && !parse_double(score_field)) continue;
    }

    if (tab == std::string::npos || word_field.empty() || score_field.empty() ||
        score_field.find('\t') != std::string_view::npos) {
      raise(Errc::malformed_line, "line " + std::to_string(line_number) +
                                      ": expected `word<TAB>score` in " + source_name);
    }
    const auto happiness = parse_double(score_field);
    if (!happiness) {
      raise(Errc::malformed_line, "line " + std::to_string(line_number) + ": non-numeric score `" +
                                      std::string(score_field) + "` in " + source_name);
    }
    check_happiness_range(*happiness, line_number);

    std::string word = normalize_token(word_field);
    if (word.empty() || has_whitespace(word)) {
      raise(Errc::malformed_line,
            "line " + std::to_string(line_number) + ": invalid word field in " + source_name);
    }
    auto [it, inserted] = entries.insert_or_assign(std::move(word), *happiness);
    if (!inserted) ++duplicates;
  }
  if (entries.empty()) raise(Errc::empty_lexicon, "no entries loaded from " + source_name);
  return LexiconLoad{Lexicon(std::move(entries), std::move(source_name)), duplicates};
}

LexiconLoad load_lexicon_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) raise(Errc::io_error, "cannot open lexicon file: " + path.string());
  return load_lexicon(in, path.filename().string());
}

void write_lexicon(std::ostream& out, const Lexicon& lexicon) {
  for (const auto& [word, happiness] : lexicon.entries()) {
    out << word << '\t' << format_double(happiness) << '\n';
  }
}

double unit_rescale(double happiness) {
  if (!(happiness >= kHappinessMin && happiness <= kHappinessMax)) {
    raise(Errc::out_of_range, "happiness " + format_double(happiness) + " outside [1,9]");
  }
  return (happiness - kHappinessMin) / (kHappinessMax - kHappinessMin);
}

Lexicon apply_lens(const Lexicon& lexicon, double exclude_low, double exclude_high) {
  if (!(exclude_low >= kHappinessMin && exclude_low <= kHappinessMax) ||
      !(exclude_high >= kHappinessMin && exclude_high <= kHappinessMax) ||
      exclude_low > exclude_high) {
    raise(Errc::out_of_range, "lens bounds must satisfy 1 <= low <= high <= 9");
  }
  std::map<std::string, double> kept;
  for (const auto& [word, happiness] : lexicon.entries()) {
    if (happiness > exclude_low && happiness < exclude_high) continue;
    kept.emplace(word, happiness);
  }
  if (kept.empty()) {
    raise(Errc::empty_lexicon, "lens (" + format_double(exclude_low) + ", " +
                                   format_double(exclude_high) + ") removed every entry");
  }
  return Lexicon(std::move(kept), lexicon.source_name());
}

}  // namespace lexaudit
