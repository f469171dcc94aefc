// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <chrono>
#include <vector>

#include "laborcast/lstnet.hpp"
#include "laborcast/panel.hpp"
#include "laborcast/windows.hpp"

namespace laborcast {

struct Forecast {
  std::string industry;
  std::chrono::sys_days anchor;  // last observed week
  std::vector<std::chrono::sys_days> weeks;
  std::vector<double> changes;  // denormalized
  std::vector<double> levels;  // anchor level plus cumulative changes
};

// Forecast from the last T rows of `panel`, normalized with `stats`. Throws
// WindowError when the panel holds fewer than T rows.
Forecast forecast_change(const TimeSeriesPanel& panel, const LSTNetParams& params, const LSTNetConfig& config,
                         const NormalizationStats& stats);

// Normalized model predictions for every window, one row of h values each.
std::vector<std::vector<double>> predict_windows(const WindowBatch& batch, const LSTNetParams& params,
                                                 const LSTNetConfig& config);

}  // namespace laborcast
