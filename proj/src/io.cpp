#include "peakfit/io.hpp"

#include <charconv>
#include <fstream>
#include <stdexcept>

namespace peakfit {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' ||
                        s.front() == '\r'))
    s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' ||
                        s.back() == '\r'))
    s.remove_suffix(1);
  return s;
}

std::string_view field_at(std::string_view line, std::size_t column) {
  std::size_t start = 0;
  for (std::size_t c = 0; c <= column; ++c) {
    const std::size_t comma = line.find(',', start);
    if (c == column)
      return trim(line.substr(start, comma == std::string_view::npos
                                         ? std::string_view::npos
                                         : comma - start));
    if (comma == std::string_view::npos) return {};
    start = comma + 1;
  }
  return {};
}

bool parse_number(std::string_view field, double& out) {
  const char* begin = field.data();
  const char* end = begin + field.size();
  const auto res = std::from_chars(begin, end, out);
  return res.ec == std::errc{} && res.ptr == end && !field.empty();
}

}  // namespace

std::vector<double> read_csv_column(const std::string& path,
                                    std::size_t column) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open input file: " + path);

  std::vector<double> values;
  std::string line;
  std::size_t line_no = 0;
  bool first_data_line = true;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto field = field_at(line, column);
    double v = 0.0;
    if (!parse_number(field, v)) {
      if (first_data_line) {  // header row
        first_data_line = false;
        continue;
      }
      throw std::runtime_error("non-numeric value on line " +
                               std::to_string(line_no) + " of " + path);
    }
    first_data_line = false;
    values.push_back(v);
  }
  if (values.empty())
    throw std::runtime_error("no numeric values in " + path);
  return values;
}

void write_csv_values(const std::string& path,
                      std::span<const double> values) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open output file: " + path);
  out.precision(17);
  for (double v : values) out << v << '\n';
}

}  // namespace peakfit
