// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <chrono>
#include <string>
#include <string_view>
#include <vector>

namespace laborcast {

// Shortest representation that reads back to the same double.
std::string format_number(double v);
// Fixed number of decimals, for human-facing tables.
std::string format_fixed(double v, int decimals);

std::string format_date(std::chrono::sys_days d);
// ISO-8601 yyyy-mm-dd. Throws ParseError.
std::chrono::sys_days parse_date(std::string_view s);

// Splits one CSV line on commas. Fields never contain quotes or commas in the
// files this project writes.
std::vector<std::string> split_csv_line(std::string_view line);

double parse_double(std::string_view s);

}  // namespace laborcast
