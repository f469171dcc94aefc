// SPDX-License-Identifier: Apache-2.0
#include "laborcast/panel.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>

#include "laborcast/csv.hpp"
#include "laborcast/error.hpp"

namespace laborcast {

namespace {

constexpr std::array<std::string_view, kIndicatorCount> kIndicatorNames = {
    "employees_k", "avg_hours", "avg_earnings", "unemp_rate", "openings_k", "hires_k", "separations_k"};

// CES supersector (employment, weekly hours, hourly earnings), CPS unemployment
// rate by industry, JOLTS openings/hires/separations levels.
constexpr std::array<IndustryInfo, 10> kCatalog = {{
    {"Construction", "construction",
     {"CES2000000001", "CES2000000002", "CES2000000003", "LNU04032231", "JTS230000000000000JOL",
      "JTS230000000000000HIL", "JTS230000000000000TSL"}},
    {"Education and Health Services", "education_health",
     {"CES6500000001", "CES6500000002", "CES6500000003", "LNU04032240", "JTS600000000000000JOL",
      "JTS600000000000000HIL", "JTS600000000000000TSL"}},
    {"Financial Activities", "financial_activities",
     {"CES5500000001", "CES5500000002", "CES5500000003", "LNU04032238", "JTS510099000000000JOL",
      "JTS510099000000000HIL", "JTS510099000000000TSL"}},
    {"Information", "information",
     {"CES5000000001", "CES5000000002", "CES5000000003", "LNU04032237", "JTS510000000000000JOL",
      "JTS510000000000000HIL", "JTS510000000000000TSL"}},
    {"Leisure and Hospitality", "leisure_hospitality",
     {"CES7000000001", "CES7000000002", "CES7000000003", "LNU04032241", "JTS700000000000000JOL",
      "JTS700000000000000HIL", "JTS700000000000000TSL"}},
    {"Manufacturing", "manufacturing",
     {"CES3000000001", "CES3000000002", "CES3000000003", "LNU04032232", "JTS300000000000000JOL",
      "JTS300000000000000HIL", "JTS300000000000000TSL"}},
    {"Natural Resources", "natural_resources",
     {"CES1000000001", "CES1000000002", "CES1000000003", "LNU04032229", "JTS110099000000000JOL",
      "JTS110099000000000HIL", "JTS110099000000000TSL"}},
    {"Other Services", "other_services",
     {"CES8000000001", "CES8000000002", "CES8000000003", "LNU04032242", "JTS810000000000000JOL",
      "JTS810000000000000HIL", "JTS810000000000000TSL"}},
    {"Professional Services", "professional_services",
     {"CES6000000001", "CES6000000002", "CES6000000003", "LNU04032239", "JTS540099000000000JOL",
      "JTS540099000000000HIL", "JTS540099000000000TSL"}},
    {"Transportation and Utilities", "transportation_utilities",
     {"CES4000000001", "CES4000000002", "CES4000000003", "LNU04032236", "JTS400000000000000JOL",
      "JTS400000000000000HIL", "JTS400000000000000TSL"}},
}};

}  // namespace

std::string_view indicator_name(std::size_t index) { return kIndicatorNames.at(index); }

std::size_t indicator_index(std::string_view name) {
  for (std::size_t i = 0; i < kIndicatorCount; ++i)
    if (kIndicatorNames[i] == name) return i;
  throw ConfigError("unknown indicator '" + std::string(name) + "'");
}

std::span<const IndustryInfo> industry_catalog() { return kCatalog; }

const IndustryInfo& find_industry(std::string_view name_or_slug) {
  for (const auto& info : kCatalog)
    if (info.name == name_or_slug || info.slug == name_or_slug) return info;
  throw ConfigError("unknown industry '" + std::string(name_or_slug) + "'");
}

void TimeSeriesPanel::resize(std::size_t rows) {
  weeks.resize(rows);
  for (auto& c : columns) c.assign(rows, std::nan(""));
  for (auto& f : interpolated) f.assign(rows, 0);
}

std::size_t TimeSeriesPanel::interpolated_cells() const {
  std::size_t n = 0;
  for (const auto& f : interpolated) n += static_cast<std::size_t>(std::count(f.begin(), f.end(), 1));
  return n;
}

TimeSeriesPanel repair_missing(TimeSeriesPanel panel) {
  const std::size_t rows = panel.size();
  for (std::size_t c = 0; c < kIndicatorCount; ++c) {
    auto& col = panel.columns[c];
    auto& flag = panel.interpolated[c];
    if (flag.size() != rows) flag.assign(rows, 0);
    std::vector<std::size_t> valid;
    for (std::size_t r = 0; r < rows; ++r)
      if (!std::isnan(col[r])) valid.push_back(r);
    if (valid.empty()) {
      throw DataError("column " + std::string(indicator_name(c)) + " of " + panel.industry +
                      " has no valid values");
    }
    for (std::size_t r = 0; r < valid.front(); ++r) {
      col[r] = col[valid.front()];
      flag[r] = 1;
    }
    for (std::size_t r = valid.back() + 1; r < rows; ++r) {
      col[r] = col[valid.back()];
      flag[r] = 1;
    }
    for (std::size_t i = 0; i + 1 < valid.size(); ++i) {
      const std::size_t a = valid[i], b = valid[i + 1];
      for (std::size_t r = a + 1; r < b; ++r) {
        const double w = static_cast<double>(r - a) / static_cast<double>(b - a);
        col[r] = col[a] + w * (col[b] - col[a]);
        flag[r] = 1;
      }
    }
  }
  return panel;
}

void audit_panel(const TimeSeriesPanel& panel) {
  const std::string who = "panel " + panel.industry + ": ";
  if (panel.size() == 0) throw DataError(who + "no rows");
  for (std::size_t r = 1; r < panel.size(); ++r) {
    if (panel.weeks[r] - panel.weeks[r - 1] != std::chrono::days{7}) {
      throw DataError(who + "weeks " + format_date(panel.weeks[r - 1]) + " and " +
                      format_date(panel.weeks[r]) + " are not consecutive");
    }
  }
  for (std::size_t c = 0; c < kIndicatorCount; ++c) {
    const auto& col = panel.columns[c];
    if (col.size() != panel.size()) throw DataError(who + "column length mismatch");
    for (std::size_t r = 0; r < col.size(); ++r) {
      const double v = col[r];
      const std::string cell = std::string(indicator_name(c)) + " at " + format_date(panel.weeks[r]);
      if (!std::isfinite(v)) throw DataError(who + "missing " + cell);
      if (v < 0.0) throw DataError(who + "negative " + cell);
      if (c == index_of(Indicator::kUnemploymentRate) && v > 100.0)
        throw DataError(who + "rate above 100 for " + cell);
    }
  }
}

void write_panel_csv(std::ostream& out, std::span<const TimeSeriesPanel> panels) {
  out << kPanelCsvHeader << '\n';
  for (const auto& p : panels) {
    for (std::size_t r = 0; r < p.size(); ++r) {
      out << format_date(p.weeks[r]) << ',' << p.industry;
      std::string mask;
      for (std::size_t c = 0; c < kIndicatorCount; ++c) {
        out << ',' << format_number(p.columns[c][r]);
        mask += p.interpolated[c][r] ? '1' : '0';
      }
      out << ',' << mask << '\n';
    }
  }
}

std::vector<TimeSeriesPanel> read_panel_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw ParseError("panel CSV is empty");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kPanelCsvHeader) throw ParseError("unexpected panel CSV header: " + line);
  std::vector<TimeSeriesPanel> panels;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto f = split_csv_line(line);
    if (f.size() != 3 + kIndicatorCount) {
      throw ParseError("panel CSV line " + std::to_string(lineno) + ": expected " +
                       std::to_string(3 + kIndicatorCount) + " fields");
    }
    auto it = std::find_if(panels.begin(), panels.end(),
                           [&](const TimeSeriesPanel& p) { return p.industry == f[1]; });
    if (it == panels.end()) {
      panels.emplace_back();
      panels.back().industry = f[1];
      it = panels.end() - 1;
    }
    it->weeks.push_back(parse_date(f[0]));
    const std::string& mask = f.back();
    if (mask.size() != kIndicatorCount) {
      throw ParseError("panel CSV line " + std::to_string(lineno) + ": bad interpolated_mask");
    }
    for (std::size_t c = 0; c < kIndicatorCount; ++c) {
      it->columns[c].push_back(parse_double(f[2 + c]));
      it->interpolated[c].push_back(mask[c] == '1' ? 1 : 0);
    }
  }
  return panels;
}

}  // namespace laborcast
