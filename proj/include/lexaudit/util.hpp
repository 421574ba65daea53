#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

namespace lexaudit {

// Shortest decimal form that round-trips the exact double. NaN -> "nan",
// infinities -> "inf"/"-inf". Used for every number we emit so reruns are
// byte-identical.
std::string format_double(double value);

// Strict full-string parse; nullopt on garbage, empty input, or trailing junk.
std::optional<double> parse_double(std::string_view text);
std::optional<std::uint64_t> parse_uint(std::string_view text);

bool is_valid_utf8(std::string_view bytes);

// FNV-1a, 64-bit. Stable across platforms; used for score-cache keys and the
// run manifest.
std::uint64_t fnv1a64(std::string_view bytes);
std::string fnv1a64_hex(std::string_view bytes);

std::string utc_now_rfc3339();

// RFC 4180 field quoting (quote when the field contains , " or newline).
std::string csv_field(std::string_view field);
// Splits one record; handles quoted fields, no embedded newlines.
std::vector<std::string> csv_split(std::string_view line, char delimiter);

std::string read_file(const std::filesystem::path& path);          // io_error if unreadable
void write_file(const std::filesystem::path& path, std::string_view content);

// Deterministic sampling helpers. std::mt19937_64 is pinned by the standard
// but the <random> distributions are not, so we draw bounded values ourselves.
std::uint64_t draw_below(std::mt19937_64& rng, std::uint64_t n);     // uniform in [0, n)
double draw_unit(std::mt19937_64& rng);                              // uniform in [0, 1)

}  // namespace lexaudit
