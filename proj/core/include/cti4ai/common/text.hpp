#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace cti4ai {

/// Shortest decimal text that parses back to exactly `value`.
std::string format_double(double value);

std::optional<double> parse_double(std::string_view text);
std::optional<long long> parse_integer(std::string_view text);

std::vector<std::string_view> split(std::string_view text, char sep);
std::string_view trim(std::string_view text);

/// Percent-encodes everything outside RFC 3986 unreserved characters.
std::string percent_encode(std::string_view text);

}  // namespace cti4ai
