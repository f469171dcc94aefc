// SPDX-License-Identifier: Apache-2.0
#include "laborcast/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "laborcast/error.hpp"
#include "laborcast/rng.hpp"

namespace laborcast {
namespace {

// December 2024 sector levels, catalog order.
struct SectorLevels {
  double employees, hours, earnings, unemployment, openings, hires, separations;
};

constexpr SectorLevels kLevels[] = {
    {8289.0, 38.8, 38.94, 5.2, 205.0, 327.0, 268.0},
    {26931.0, 32.9, 35.01, 2.7, 1518.0, 625.0, 677.0},
    {9206.0, 37.7, 46.37, 2.1, 390.0, 164.0, 168.0},
    {2944.0, 36.9, 51.04, 3.9, 105.0, 50.0, 62.0},
    {16979.0, 25.5, 22.40, 5.4, 998.0, 675.0, 804.0},
    {12760.0, 40.1, 34.54, 3.5, 398.0, 204.0, 249.0},
    {624.0, 44.3, 39.95, 5.4, 21.0, 15.0, 23.0},
    {6002.0, 32.0, 32.37, 3.8, 248.0, 188.0, 198.0},
    {22614.0, 36.3, 43.33, 3.7, 1276.0, 712.0, 937.0},
    {29033.0, 34.0, 30.34, 4.3, 988.0, 913.0, 1117.0},
};

const SectorLevels& levels_for(std::size_t industry) {
  if (industry >= std::size(kLevels)) {
    throw ContractError("industry index " + std::to_string(industry) + " is outside the catalog");
  }
  return kLevels[industry];
}

std::uint64_t stream_seed(std::uint64_t seed, std::size_t industry) {
  return seed * 0x9E3779B97F4A7C15ULL + 0xD1B54A32D192ED03ULL * (industry + 1);
}

TimeSeriesPanel empty_panel(std::size_t industry, std::size_t weeks, std::chrono::sys_days start) {
  TimeSeriesPanel p;
  p.industry = std::string(industry_catalog()[industry].name);
  p.resize(weeks);
  for (std::size_t t = 0; t < weeks; ++t) p.weeks[t] = start + std::chrono::weeks(t);
  for (auto& col : p.interpolated) std::fill(col.begin(), col.end(), std::uint8_t{0});
  return p;
}

double positive(double v) { return std::max(v, 0.0); }

}  // namespace

TimeSeriesPanel synthetic_panel(std::size_t industry, const SyntheticOptions& o) {
  const auto& lv = levels_for(industry);
  Rng rng(stream_seed(o.seed, industry));
  const double two_pi = 2.0 * std::numbers::pi;
  const double phase4 = rng.uniform(0.0, two_pi);
  const double phase24 = rng.uniform(0.0, two_pi);
  const double amp4 = o.weekly_amplitude * rng.uniform(0.7, 1.3);
  const double amp24 = o.monthly_amplitude * rng.uniform(0.7, 1.3);
  const double noise = o.noise * rng.uniform(0.5, 1.5);
  const double base = lv.employees / (1.0 + o.growth);

  auto p = empty_panel(industry, o.weeks, o.start);
  auto& emp = p.columns[index_of(Indicator::kEmployees)];
  auto& hours = p.columns[index_of(Indicator::kAvgHours)];
  auto& earn = p.columns[index_of(Indicator::kAvgEarnings)];
  auto& unemp = p.columns[index_of(Indicator::kUnemploymentRate)];
  auto& open = p.columns[index_of(Indicator::kOpenings)];
  auto& hires = p.columns[index_of(Indicator::kHires)];
  auto& seps = p.columns[index_of(Indicator::kSeparations)];

  const double n = static_cast<double>(o.weeks);
  for (std::size_t i = 0; i < o.weeks; ++i) {
    const double t = static_cast<double>(i);
    const double s4 = std::sin(two_pi * t / 4.0 + phase4);
    const double s24 = std::sin(two_pi * t / 24.0 + phase24);
    emp[i] = base * (1.0 + o.growth * t / n + amp4 * s4 + amp24 * s24 + noise * rng.normal());
    hours[i] = positive(lv.hours * (1.0 + 0.004 * s24 + 0.002 * rng.normal()));
    earn[i] = positive(lv.earnings * (0.75 + 0.25 * t / n) * (1.0 + 0.002 * rng.normal()));
    unemp[i] = std::clamp(lv.unemployment * (1.0 - 2.0 * amp24 * s24 + 0.02 * rng.normal()), 0.0, 100.0);
    open[i] = positive(lv.openings * (1.0 + 0.05 * std::sin(two_pi * (t + 3.0) / 24.0 + phase24) +
                                      0.02 * rng.normal()));
  }
  // Weekly flows sized so hires - separations equals the level change.
  for (std::size_t i = 0; i < o.weeks; ++i) {
    const double change = i == 0 ? 0.0 : emp[i] - emp[i - 1];
    seps[i] = positive(lv.separations * (1.0 + 0.01 * rng.normal()));
    hires[i] = positive(seps[i] + change);
  }
  return p;
}

std::vector<TimeSeriesPanel> synthetic_panels(const SyntheticOptions& options) {
  std::vector<TimeSeriesPanel> out;
  for (std::size_t i = 0; i < industry_catalog().size(); ++i) out.push_back(synthetic_panel(i, options));
  return out;
}

TimeSeriesPanel random_walk_panel(std::size_t industry, std::size_t weeks, std::uint64_t seed) {
  const auto& lv = levels_for(industry);
  Rng rng(stream_seed(seed ^ 0x5A5A5A5AULL, industry));
  auto p = empty_panel(industry, weeks, SyntheticOptions{}.start);
  const double step = lv.employees * 0.002;
  double level = lv.employees;
  for (std::size_t i = 0; i < weeks; ++i) {
    level += step * rng.normal();
    p.columns[index_of(Indicator::kEmployees)][i] = positive(level);
    p.columns[index_of(Indicator::kAvgHours)][i] = lv.hours * (1.0 + 0.01 * rng.normal());
    p.columns[index_of(Indicator::kAvgEarnings)][i] = lv.earnings * (1.0 + 0.01 * rng.normal());
    p.columns[index_of(Indicator::kUnemploymentRate)][i] = std::clamp(lv.unemployment * (1.0 + 0.05 * rng.normal()), 0.0, 100.0);
    p.columns[index_of(Indicator::kOpenings)][i] = positive(lv.openings * (1.0 + 0.05 * rng.normal()));
    p.columns[index_of(Indicator::kHires)][i] = positive(lv.hires * (1.0 + 0.05 * rng.normal()));
    p.columns[index_of(Indicator::kSeparations)][i] = positive(lv.separations * (1.0 + 0.05 * rng.normal()));
  }
  return p;
}

std::array<std::vector<MonthlyObservation>, kIndicatorCount> synthetic_monthly(std::size_t industry,
                                                                              YearMonth first, YearMonth last,
                                                                              std::uint64_t seed) {
  const auto& lv = levels_for(industry);
  const int months = (last.year - first.year) * 12 + static_cast<int>(last.month) - static_cast<int>(first.month) + 1;
  if (months < 2) throw ContractError("synthetic monthly span needs at least two months");
  Rng rng(stream_seed(seed ^ 0xA5A5A5A5ULL, industry));
  const double two_pi = 2.0 * std::numbers::pi;
  const double phase = rng.uniform(0.0, two_pi);
  const double amp = 0.006 * rng.uniform(0.7, 1.3);
  const double noise = 0.001 * rng.uniform(0.5, 1.5);
  const double growth = 0.15 * rng.uniform(0.3, 1.0);
  const double m = static_cast<double>(months);

  std::array<std::vector<MonthlyObservation>, kIndicatorCount> out;
  for (int k = 0; k < months; ++k) {
    const int idx = static_cast<int>(first.month) - 1 + k;
    const int year = first.year + idx / 12;
    const unsigned month = static_cast<unsigned>(idx % 12 + 1);
    const double t = static_cast<double>(k);
    const double season = std::sin(two_pi * static_cast<double>(month) / 12.0 + phase);
    const double rel = 1.0 - growth * (m - 1.0 - t) / m;
    auto put = [&](Indicator ind, double v) { out[index_of(ind)].push_back({year, month, v}); };
    // Values are rounded the way the source publishes them.
    auto round_to = [](double v, double scale) { return std::round(v * scale) / scale; };
    put(Indicator::kEmployees, round_to(lv.employees * rel * (1.0 + amp * season + noise * rng.normal()), 10.0));
    put(Indicator::kAvgHours, round_to(lv.hours * (1.0 + 0.005 * season + 0.003 * rng.normal()), 10.0));
    put(Indicator::kAvgEarnings, round_to(lv.earnings * (0.7 + 0.3 * t / m) * (1.0 + 0.002 * rng.normal()), 100.0));
    put(Indicator::kUnemploymentRate,
        std::clamp(round_to(lv.unemployment * (1.0 - 3.0 * amp * season + 0.03 * rng.normal()), 10.0), 0.0, 100.0));
    put(Indicator::kOpenings, round_to(positive(lv.openings * (1.0 + 0.08 * season + 0.03 * rng.normal())), 1.0));
    put(Indicator::kHires, round_to(positive(lv.hires * (1.0 + 0.06 * season + 0.03 * rng.normal())), 1.0));
    put(Indicator::kSeparations, round_to(positive(lv.separations * (1.0 - 0.04 * season + 0.03 * rng.normal())), 1.0));
  }
  return out;
}

}  // namespace laborcast
