#include "occ/csv.hpp"

#include <charconv>
#include <istream>
#include <string>

#include "occ/error.hpp"

namespace occ::csv {

namespace {

std::string_view trim_cr(std::string_view s) {
  if (!s.empty() && s.back() == '\r') s.remove_suffix(1);
  return s;
}

}  // namespace

std::vector<std::string_view> split(std::string_view line) {
  line = trim_cr(line);
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    auto pos = line.find(',', start);
    if (pos == std::string_view::npos) {
      out.push_back(line.substr(start));
      break;
    }
    out.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
  return out;
}

double parse_double(std::string_view field, std::size_t row, std::string_view column) {
  double value = 0.0;
  const char* first = field.data();
  const char* last = field.data() + field.size();
  if (field.empty()) throw ParseError(row, std::string(column), "empty field");
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last)
    throw ParseError(row, std::string(column), "not a number: '" + std::string(field) + "'");
  return value;
}

long long parse_int(std::string_view field, std::size_t row, std::string_view column) {
  long long value = 0;
  const char* first = field.data();
  const char* last = field.data() + field.size();
  if (field.empty()) throw ParseError(row, std::string(column), "empty field");
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last)
    throw ParseError(row, std::string(column), "not an integer: '" + std::string(field) + "'");
  return value;
}

std::string format(double value) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  (void)ec;
  return std::string(buf, ptr);
}

void expect_header(std::istream& in, std::string_view expected, std::string_view what) {
  std::string line;
  if (!std::getline(in, line)) throw FormatError(std::string(what) + ": missing header");
  if (trim_cr(line) != expected)
    throw FormatError(std::string(what) + ": expected header '" + std::string(expected) + "', got '" +
                      std::string(trim_cr(line)) + "'");
}

}  // namespace occ::csv
