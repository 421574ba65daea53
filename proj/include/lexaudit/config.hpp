#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "lexaudit/reference.hpp"
#include "lexaudit/regress.hpp"

namespace lexaudit {

// Everything a run needs. Defaults are documented in the README; every key
// can come from a `key = value` config file and be overridden by a CLI flag.
// Secrets never live here, only the name of the environment variable.
struct RunConfig {
  std::filesystem::path lexicon_path;
  std::filesystem::path corpus_path;
  std::filesystem::path cache_path;
  std::filesystem::path output_dir;

  // "http", "stub:lexicon-echo", "stub:perturbed-lexicon", "stub:constant"
  std::string provider;
  std::filesystem::path stub_lexicon_path;    // defaults to lexicon_path
  std::filesystem::path stub_overrides_path;  // word<TAB>happiness lines
  double stub_constant = 0.5;

  ProviderConfig http;

  std::optional<double> lens_low;
  std::optional<double> lens_high;

  std::uint64_t min_domains = 3;
  FeatureMode features = FeatureMode::presence;
  double zero_p_threshold = 1e-300;
  std::uint64_t top_k = 10;
  std::uint64_t seed = 42;

  std::uint64_t synth_docs = 2000;
  std::vector<std::string> synth_domains = {"finance", "news", "social", "reviews"};
  std::uint64_t synth_vocab = 300;
  std::uint64_t synth_words_min = 8;
  std::uint64_t synth_words_max = 30;
  std::filesystem::path synth_output;

  bool operator==(const RunConfig&) const = default;
};

RunConfig parse_config(std::istream& in, const std::string& source_name = "config");
RunConfig load_config_file(const std::filesystem::path& path);

// Canonical serialization: every key, fixed order. parse(write(c)) == c, and
// the manifest's config hash is taken over this form.
std::string write_config(const RunConfig& config);

std::string feature_mode_name(FeatureMode mode);

}  // namespace lexaudit
