// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <span>
#include <string>
#include <vector>

#include "laborcast/metrics.hpp"
#include "laborcast/panel.hpp"
#include "laborcast/windows.hpp"

namespace laborcast {

// Repeats the last observed value h times. Throws ContractError on an empty
// observation list.
std::vector<double> persistence_forecast(std::span<const double> observed, std::size_t horizon);

// Mean of the h true future values, repeated h times. It reads the future, so it is not a forecast.
// Throws ContractError unless future.size() == horizon.
std::vector<double> oracle_forecast(std::span<const double> future, std::size_t horizon);

enum class BaselineKind { kPersistence, kOracle };

struct BaselineForecast {
  BaselineKind kind = BaselineKind::kPersistence;
  std::vector<std::vector<double>> predictions;  // one row per window
  std::vector<std::vector<double>> actuals;
};

// Runs a baseline over the same windows the model sees; persistence reads
// each window's observed change history, the oracle its targets.
BaselineForecast run_baseline(BaselineKind kind, const WindowBatch& windows);

// Metrics over every (window, step) pair.
MetricReport score(const BaselineForecast& forecast);

struct BaselineRow {
  std::string industry;
  MetricReport oracle;
  MetricReport persistence;
};

struct BaselineTable {
  std::vector<BaselineRow> rows;
  BaselineRow average;  // unweighted mean over industries
};

// Both baselines on the test split of every panel, through the same
// windowing and normalization as model training.
BaselineTable run_baseline_suite(std::span<const TimeSeriesPanel> panels, const WindowSpec& spec,
                                 double val_fraction, double test_fraction);

BaselineTable make_baseline_table(std::vector<BaselineRow> rows);

}  // namespace laborcast
