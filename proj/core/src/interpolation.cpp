// SPDX-License-Identifier: Apache-2.0
#include "laborcast/interpolation.hpp"

#include <algorithm>
#include <cmath>

#include "laborcast/error.hpp"

namespace laborcast {

using namespace std::chrono;

sys_days reference_week_start(int year, unsigned month) {
  const sys_days twelfth{year_month_day{std::chrono::year{year}, std::chrono::month{month}, day{12}}};
  // weekday::iso_encoding: Monday = 1 ... Sunday = 7
  const unsigned iso = weekday{twelfth}.iso_encoding();
  return twelfth - days{iso - 1};
}

std::vector<double> interpolate_anchors(std::span<const WeekAnchor> anchors,
                                        std::vector<std::uint8_t>* interpolated) {
  if (anchors.size() < 2) throw DataError("interpolation needs at least two anchors");
  for (std::size_t i = 1; i < anchors.size(); ++i) {
    if (anchors[i].week <= anchors[i - 1].week) throw DataError("anchors must be strictly increasing in week");
  }
  const std::ptrdiff_t first = anchors.front().week;
  const auto count = static_cast<std::size_t>(anchors.back().week - first + 1);
  std::vector<double> out(count);
  if (interpolated) interpolated->assign(count, 1);
  for (std::size_t i = 0; i + 1 < anchors.size(); ++i) {
    const WeekAnchor& a = anchors[i];
    const WeekAnchor& b = anchors[i + 1];
    const double span = static_cast<double>(b.week - a.week);
    for (std::ptrdiff_t w = a.week; w < b.week; ++w) {
      const double t = static_cast<double>(w - a.week) / span;
      out[static_cast<std::size_t>(w - first)] = a.value + t * (b.value - a.value);
    }
  }
  for (const WeekAnchor& a : anchors) {
    out[static_cast<std::size_t>(a.week - first)] = a.value;
    if (interpolated) (*interpolated)[static_cast<std::size_t>(a.week - first)] = 0;
  }
  return out;
}

WeeklySeries interpolate_weekly(std::span<const MonthlyObservation> monthly) {
  std::vector<MonthlyObservation> valid;
  for (const auto& m : monthly)
    if (!std::isnan(m.value)) valid.push_back(m);
  if (valid.size() < 2) {
    throw DataError("weekly interpolation needs at least two monthly values, got " +
                    std::to_string(valid.size()));
  }
  std::sort(valid.begin(), valid.end(), [](const auto& a, const auto& b) {
    return a.year != b.year ? a.year < b.year : a.month < b.month;
  });
  const sys_days origin = reference_week_start(valid.front().year, valid.front().month);
  std::vector<WeekAnchor> anchors;
  for (const auto& m : valid) {
    const auto week = (reference_week_start(m.year, m.month) - origin).count() / 7;
    if (!anchors.empty() && anchors.back().week == week) {
      throw DataError("duplicate month " + std::to_string(m.year) + "-" + std::to_string(m.month));
    }
    anchors.push_back({week, m.value});
  }
  WeeklySeries out;
  out.start = origin;
  out.values = interpolate_anchors(anchors, &out.interpolated);
  return out;
}

TimeSeriesPanel assemble_panel(const std::string& industry,
                               const std::array<std::vector<MonthlyObservation>, kIndicatorCount>& series,
                               YearMonth first, YearMonth last) {
  const sys_days begin = reference_week_start(first.year, first.month);
  const sys_days end = reference_week_start(last.year, last.month);
  if (end < begin) throw DataError("panel span ends before it starts");
  const auto rows = static_cast<std::size_t>((end - begin).count() / 7 + 1);
  TimeSeriesPanel panel;
  panel.industry = industry;
  panel.resize(rows);
  for (std::size_t r = 0; r < rows; ++r) panel.weeks[r] = begin + days{7 * static_cast<long>(r)};
  for (std::size_t c = 0; c < kIndicatorCount; ++c) {
    std::size_t valid = 0;
    for (const auto& m : series[c]) valid += std::isnan(m.value) ? 0 : 1;
    if (valid < 2) continue;  // left missing; repair_missing reports it
    const WeeklySeries w = interpolate_weekly(series[c]);
    const auto offset = (w.start - begin).count() / 7;
    for (std::size_t i = 0; i < w.values.size(); ++i) {
      const auto r = offset + static_cast<std::ptrdiff_t>(i);
      if (r < 0 || r >= static_cast<std::ptrdiff_t>(rows)) continue;
      panel.columns[c][static_cast<std::size_t>(r)] = w.values[i];
      panel.interpolated[c][static_cast<std::size_t>(r)] = w.interpolated[i];
    }
  }
  return panel;
}

}  // namespace laborcast
