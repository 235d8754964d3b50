// SPDX-License-Identifier: Apache-2.0

#include "halfspace/csv.hpp"

#include <charconv>
#include <cmath>
#include <vector>

namespace halfspace {

std::string csv_number(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, res.ptr);
}

std::string csv_preamble(std::string_view schema, int version,
                         std::initializer_list<std::string_view> columns) {
  std::string out = "# schema: ";
  out += schema;
  out += " v" + std::to_string(version) + "\n";
  bool first = true;
  for (auto c : columns) {
    if (!first) out += ',';
    out += c;
    first = false;
  }
  out += '\n';
  return out;
}

void csv_append_row(std::string& out, std::span<const double> values) {
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ',';
    out += csv_number(values[i]);
  }
  out += '\n';
}

void csv_append_row(std::string& out, std::initializer_list<double> values) {
  csv_append_row(out, std::span<const double>(values.begin(), values.size()));
}

}  // namespace halfspace
