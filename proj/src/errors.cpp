#include "lexaudit/errors.hpp"

namespace lexaudit {

std::string_view errc_name(Errc code) noexcept {
  switch (code) {
    case Errc::malformed_line: return "MalformedLine";
    case Errc::out_of_range: return "OutOfRange";
    case Errc::empty_lexicon: return "EmptyLexicon";
    case Errc::no_coverage: return "NoCoverage";
    case Errc::duplicate_id: return "DuplicateId";
    case Errc::empty_corpus: return "EmptyCorpus";
    case Errc::empty_vocabulary: return "EmptyVocabulary";
    case Errc::row_mismatch: return "RowMismatch";
    case Errc::underdetermined: return "Underdetermined";
    case Errc::invalid_df: return "InvalidDf";
    case Errc::k_too_large: return "KTooLarge";
    case Errc::degenerate_input: return "DegenerateInput";
    case Errc::empty_input: return "EmptyInput";
    case Errc::unknown_stub_kind: return "UnknownStubKind";
    case Errc::provider_error: return "ProviderError";
    case Errc::timeout: return "Timeout";
    case Errc::score_out_of_range: return "ScoreOutOfRange";
    case Errc::io_error: return "IoError";
    case Errc::config_error: return "ConfigError";
  }
  return "UnknownError";
}

ErrorCategory errc_category(Errc code) noexcept {
  switch (code) {
    case Errc::provider_error:
    case Errc::timeout:
    case Errc::score_out_of_range:
      return ErrorCategory::provider;
    case Errc::no_coverage:
    case Errc::empty_vocabulary:
    case Errc::underdetermined:
    case Errc::degenerate_input:
      return ErrorCategory::degeneracy;
    default:
      return ErrorCategory::input;
  }
}

Error::Error(Errc code, const std::string& message)
    : std::runtime_error(std::string(errc_name(code)) + ": " + message), code_(code) {}

void raise(Errc code, const std::string& message) { throw Error(code, message); }

}  // namespace lexaudit
