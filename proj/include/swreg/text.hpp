#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace swreg {

/// Shortest decimal form that parses back to the same double.
std::string format_double(double value);

/// Strict full-string parse; returns false on trailing garbage.
bool parse_double(std::string_view text, double& out);
bool parse_long(std::string_view text, long& out);

std::string_view trim(std::string_view text);
std::vector<std::string_view> split(std::string_view text, char sep);

}  // namespace swreg
