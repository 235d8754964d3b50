// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <initializer_list>
#include <span>
#include <string>
#include <string_view>

namespace halfspace {

/// Round-trip decimal form of a double, locale independent.
std::string csv_number(double value);

/// "# schema: <name> v<version>" followed by the column header.
std::string csv_preamble(std::string_view schema, int version,
                         std::initializer_list<std::string_view> columns);

void csv_append_row(std::string& out, std::span<const double> values);
void csv_append_row(std::string& out, std::initializer_list<double> values);

}  // namespace halfspace
