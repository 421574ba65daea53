#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace lexaudit {

// Every failure the library reports, named after the contract it violates.
enum class Errc {
  malformed_line,
  out_of_range,
  empty_lexicon,
  no_coverage,
  duplicate_id,
  empty_corpus,
  empty_vocabulary,
  row_mismatch,
  underdetermined,
  invalid_df,
  k_too_large,
  degenerate_input,
  empty_input,
  unknown_stub_kind,
  provider_error,
  timeout,
  score_out_of_range,
  io_error,
  config_error,
};

std::string_view errc_name(Errc code) noexcept;

// Exit-code buckets used by the CLI: input -> 2, provider -> 3, degeneracy -> 1.
enum class ErrorCategory { input, provider, degeneracy };

ErrorCategory errc_category(Errc code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& message);

  Errc code() const noexcept { return code_; }
  ErrorCategory category() const noexcept { return errc_category(code_); }

 private:
  Errc code_;
};

[[noreturn]] void raise(Errc code, const std::string& message);

}  // namespace lexaudit
