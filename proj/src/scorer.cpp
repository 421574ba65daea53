#include "lexaudit/scorer.hpp"

#include <numeric>
#include <vector>

#include "lexaudit/errors.hpp"
#include "lexaudit/util.hpp"

namespace lexaudit {

ScorePair make_score_pair(std::string doc_id, double hedonometer_unit, double reference_unit) {
  const double difference = score_difference(hedonometer_unit, reference_unit);
  return ScorePair{std::move(doc_id), hedonometer_unit, reference_unit, difference};
}

double hedonometer_score(const TokenCounts& counts, const Lexicon& lexicon) {
  std::vector<std::pair<std::size_t, double>> matched;  // (count, happiness)
  std::size_t gcd = 0;
  for (const auto& [word, count] : counts.counts) {
    if (count == 0) continue;
    if (const double* happiness = lexicon.find(word)) {
      matched.emplace_back(count, *happiness);
      gcd = std::gcd(gcd, count);
    }
  }
  if (matched.empty()) {
    raise(Errc::no_coverage, "document shares no word with lexicon `" + lexicon.source_name() + "`");
  }
  double weighted = 0;
  double total = 0;
  for (const auto& [count, happiness] : matched) {
    const double reduced = static_cast<double>(count / gcd);
    weighted += reduced * happiness;
    total += reduced;
  }
  return weighted / total;
}

DocumentScore score_counts(const TokenCounts& counts, const Lexicon& lexicon) {
  DocumentScore score;
  score.total_tokens = counts.total;
  for (const auto& [word, count] : counts.counts) {
    if (lexicon.find(word) != nullptr) score.matched_tokens += count;
  }
  score.raw = hedonometer_score(counts, lexicon);
  score.unit = unit_rescale(score.raw);
  return score;
}

DocumentScore score_document(std::string_view text, const Lexicon& lexicon) {
  return score_counts(count_text(text), lexicon);
}

double score_difference(double hedonometer_unit, double reference_unit) {
  if (!(hedonometer_unit >= 0.0 && hedonometer_unit <= 1.0)) {
    raise(Errc::out_of_range, "hedonometer unit score " + format_double(hedonometer_unit) +
                                  " outside [0,1]");
  }
  if (!(reference_unit >= 0.0 && reference_unit <= 1.0)) {
    raise(Errc::out_of_range,
          "reference unit score " + format_double(reference_unit) + " outside [0,1]");
  }
  return hedonometer_unit - reference_unit;
}

}  // namespace lexaudit
