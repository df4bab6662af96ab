#pragma once

#include <cstdio>
#include <cstdlib>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace muskat::detail {

// %.17g round-trips every finite double exactly.
inline std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

inline std::vector<std::string> split_csv_row(std::string_view line) {
  std::vector<std::string> cells;
  size_t start = 0;
  while (true) {
    const auto pos = line.find(',', start);
    cells.emplace_back(trim(line.substr(start, pos == std::string_view::npos ? pos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return cells;
}

inline double parse_double(const std::string& cell, int row, int column) {
  const char* begin = cell.c_str();
  char* end = nullptr;
  const double v = std::strtod(begin, &end);
  if (cell.empty() || end != begin + cell.size()) {
    throw std::runtime_error("row " + std::to_string(row) + ", column " + std::to_string(column) +
                             ": cannot parse '" + cell + "' as a number");
  }
  return v;
}

}  // namespace muskat::detail
