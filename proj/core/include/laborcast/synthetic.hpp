// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <chrono>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "laborcast/interpolation.hpp"
#include "laborcast/panel.hpp"

namespace laborcast {

// Weekly panels with a linear trend, period-4 and period-24 seasonality and
// Gaussian noise, scaled to each sector's December 2024 levels. Net hires
// (hires minus separations) track the employment change, as in the JOLTS
// accounting identity.
struct SyntheticOptions {
  std::size_t weeks = 900;
  std::uint64_t seed = 2024;
  std::chrono::sys_days start{std::chrono::year{2007} / std::chrono::September / 3};
  double growth = 0.02;  // total relative trend over the panel
  double weekly_amplitude = 0.004;  // period-4 amplitude relative to the level
  double monthly_amplitude = 0.006;  // period-24 amplitude
  double noise = 0.0008;  // level noise sd relative to the level
};

// Panel for catalog industry `industry` (index into industry_catalog()).
TimeSeriesPanel synthetic_panel(std::size_t industry, const SyntheticOptions& options = {});
// All catalog industries, catalog order. Each industry draws from its own
// stream so panels do not depend on each other.
std::vector<TimeSeriesPanel> synthetic_panels(const SyntheticOptions& options = {});

// Employment follows a Gaussian random walk; other indicators are noise
// around the sector level.
TimeSeriesPanel random_walk_panel(std::size_t industry, std::size_t weeks, std::uint64_t seed);

// Monthly series for every indicator of a catalog industry over [first, last],
// with yearly seasonality, trend and noise. Used to build offline fixtures.
std::array<std::vector<MonthlyObservation>, kIndicatorCount> synthetic_monthly(std::size_t industry,
                                                                              YearMonth first, YearMonth last,
                                                                              std::uint64_t seed);

}  // namespace laborcast
