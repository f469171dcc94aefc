// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <chrono>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace laborcast {

inline constexpr std::size_t kIndicatorCount = 7;

// Column order of every panel and of the model's feature axis.
enum class Indicator : std::size_t {
  kEmployees = 0,  // thousands
  kAvgHours,  // weekly hours
  kAvgEarnings,  // dollars
  kUnemploymentRate,  // percent
  kOpenings,  // thousands
  kHires,  // thousands
  kSeparations,  // thousands
};

constexpr std::size_t index_of(Indicator i) { return static_cast<std::size_t>(i); }

// CSV column name, e.g. "employees_k".
std::string_view indicator_name(std::size_t index);
// Inverse of indicator_name. Throws ConfigError.
std::size_t indicator_index(std::string_view name);

struct IndustryInfo {
  std::string_view name;  // as printed in reports
  std::string_view slug;  // file-name safe
  std::array<std::string_view, kIndicatorCount> series_ids;  // BLS series, indicator order
};

// The ten sectors modelled, with the BLS series backing each indicator.
std::span<const IndustryInfo> industry_catalog();
// Lookup by name or slug. Throws ConfigError.
const IndustryInfo& find_industry(std::string_view name_or_slug);

// Weekly multivariate panel for one industry. Missing cells are NaN until
// repair_missing() fills them.
struct TimeSeriesPanel {
  std::string industry;
  std::vector<std::chrono::sys_days> weeks;
  std::array<std::vector<double>, kIndicatorCount> columns;
  // 1 where the cell was produced by interpolation or gap repair.
  std::array<std::vector<std::uint8_t>, kIndicatorCount> interpolated;

  std::size_t size() const noexcept { return weeks.size(); }
  const std::vector<double>& column(Indicator i) const { return columns[index_of(i)]; }
  // Allocates columns for `rows` weeks, all missing and unflagged.
  void resize(std::size_t rows);
  std::size_t interpolated_cells() const;
};

// Interior gaps are filled linearly between the nearest valid neighbours,
// leading and trailing gaps with the nearest valid value. Filled cells are
// flagged. Throws DataError naming a column with no valid value.
TimeSeriesPanel repair_missing(TimeSeriesPanel panel);

// Checks the prepared-panel invariants: weekly gap-free timestamps, no missing
// cells, non-negative values, rate within [0, 100]. Throws DataError.
void audit_panel(const TimeSeriesPanel& panel);

inline constexpr std::string_view kPanelCsvHeader =
    "week_start,industry,employees_k,avg_hours,avg_earnings,unemp_rate,openings_k,hires_k,"
    "separations_k,interpolated_mask";

// interpolated_mask holds one 0/1 character per indicator, in column order.
void write_panel_csv(std::ostream& out, std::span<const TimeSeriesPanel> panels);
// Panels in order of first appearance. Throws ParseError.
std::vector<TimeSeriesPanel> read_panel_csv(std::istream& in);

}  // namespace laborcast
