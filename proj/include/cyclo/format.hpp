#pragma once

#include <string>

namespace cyclo {

// Shortest decimal text that parses back to exactly `value`.
std::string format_double(double value);

// Parses a full decimal/scientific literal; throws ConfigError naming `what`.
double parse_double(const std::string& text, const std::string& what);

}  // namespace cyclo
