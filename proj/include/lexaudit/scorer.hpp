#pragma once

#include <cstddef>
#include <string>
#include <string_view>

#include "lexaudit/lexicon.hpp"
#include "lexaudit/tokenize.hpp"

namespace lexaudit {

// One document's scores on the shared [0,1] scale.
struct ScorePair {
  std::string doc_id;
  double hedonometer_unit = 0;
  double reference_unit = 0;
  double difference = 0;  // hedonometer_unit - reference_unit
};

ScorePair make_score_pair(std::string doc_id, double hedonometer_unit, double reference_unit);

// Length-normalized weighted mean of matched word happiness, on the 1..9
// scale. Matched counts are reduced by their gcd first so scaling all counts
// by a constant yields the bit-identical score. Throws NoCoverage when the
// document shares no word with the lexicon.
double hedonometer_score(const TokenCounts& counts, const Lexicon& lexicon);

struct DocumentScore {
  double raw = 0;                  // 1..9
  double unit = 0;                 // [0,1]
  std::size_t matched_tokens = 0;  // occurrences of lexicon words
  std::size_t total_tokens = 0;    // all token occurrences
};

// tokenize + count + hedonometer_score + unit_rescale.
DocumentScore score_document(std::string_view text, const Lexicon& lexicon);
DocumentScore score_counts(const TokenCounts& counts, const Lexicon& lexicon);

// Signed difference of two unit-scale scores; validates both are in [0,1].
double score_difference(double hedonometer_unit, double reference_unit);

}  // namespace lexaudit
