// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <chrono>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "laborcast/panel.hpp"

namespace laborcast {

// One published monthly value. NaN marks a month the source left blank.
struct MonthlyObservation {
  int year = 0;
  unsigned month = 0;  // 1..12
  double value = 0.0;

  bool operator==(const MonthlyObservation& o) const {
    return year == o.year && month == o.month &&
           (value == o.value || (value != value && o.value != o.value));
  }
};

// Monday of the week that contains the 12th of the month, the survey
// reference week.
std::chrono::sys_days reference_week_start(int year, unsigned month);

struct WeekAnchor {
  std::ptrdiff_t week = 0;  // index on the weekly grid
  double value = 0.0;
};

// Piecewise-linear values for every week from the first anchor to the last.
// Anchors must be strictly increasing in week. Anchor weeks reproduce their
// values exactly; when `interpolated` is given it receives 1 for every
// non-anchor week.
std::vector<double> interpolate_anchors(std::span<const WeekAnchor> anchors,
                                        std::vector<std::uint8_t>* interpolated = nullptr);

struct WeeklySeries {
  std::chrono::sys_days start;
  std::vector<double> values;
  std::vector<std::uint8_t> interpolated;
};

// Monthly values placed on their reference weeks and linearly interpolated in
// between. Blank months are skipped. Throws DataError when fewer than two
// valid months remain.
WeeklySeries interpolate_weekly(std::span<const MonthlyObservation> monthly);

struct YearMonth {
  int year = 0;
  unsigned month = 1;
};

// Builds an industry panel on the weekly grid running from the reference week
// of `first` to the reference week of `last`. Cells a series does not cover
// stay missing; run repair_missing() afterwards.
TimeSeriesPanel assemble_panel(const std::string& industry,
                               const std::array<std::vector<MonthlyObservation>, kIndicatorCount>& series,
                               YearMonth first, YearMonth last);

}  // namespace laborcast
