#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace occ::csv {

/// Splits one line on commas. No quoting; trailing '\r' is dropped.
std::vector<std::string_view> split(std::string_view line);

/// Strict decimal parse of the whole field ('.' decimal point). Throws ParseError.
double parse_double(std::string_view field, std::size_t row, std::string_view column);
long long parse_int(std::string_view field, std::size_t row, std::string_view column);

/// Shortest representation that parses back to the same double.
std::string format(double value);

/// Reads the header line and checks it matches `expected` exactly (after trimming '\r').
void expect_header(std::istream& in, std::string_view expected, std::string_view what);

}  // namespace occ::csv
