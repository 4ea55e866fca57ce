#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace solsim::csv {

// Splits one CSV line on commas; fields are trimmed of surrounding
// whitespace. No quoting support: none of the formats this tool reads or
// writes uses quoted fields.
std::vector<std::string_view> split(std::string_view line);

std::optional<double> parse_double(std::string_view field);
std::optional<std::int64_t> parse_int(std::string_view field);

// Shortest round-trip representation (std::to_chars); identical bytes
// for identical doubles on every run.
std::string format_double(double v);

void write_row(std::ostream& out, const std::vector<std::string>& fields);

} // namespace solsim::csv
