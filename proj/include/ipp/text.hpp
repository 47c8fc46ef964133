#pragma once

#include <string>
#include <string_view>

namespace ipp {

/// Shortest decimal representation that parses back to the same double.
std::string format_double(double v);

/// Strict parse of a whole string as a double; throws std::invalid_argument.
double parse_double(std::string_view s);

}  // namespace ipp
