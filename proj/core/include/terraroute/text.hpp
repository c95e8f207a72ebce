#pragma once

#include <optional>
#include <string>
#include <string_view>

namespace terraroute {

// Shortest decimal text that parses back to exactly `value`.
std::string format_double(double value);

// Full-string parse after trimming surrounding whitespace; std::nullopt on
// anything else left over. A single leading '+' is accepted.
std::optional<double> parse_double(std::string_view text);
std::optional<long long> parse_integer(std::string_view text);

std::string_view trim(std::string_view text);

}  // namespace terraroute
