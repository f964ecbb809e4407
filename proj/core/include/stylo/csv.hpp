#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace stylo::csv {

/// Shortest round-trip representation; NaN is written as "NA".
std::string format_number(double value);

/// Parses a number or "NA"/"NaN"/"" (returned as NaN). Throws ParseError.
double parse_number(std::string_view field);

/// Quotes a field when it contains a comma, quote or newline.
std::string escape(std::string_view field);

std::string join(const std::vector<std::string>& fields);

/// Splits one CSV record (no embedded newlines).
std::vector<std::string> split(std::string_view line);

}  // namespace stylo::csv
