// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <chrono>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "laborcast/baselines.hpp"
#include "laborcast/forecasting.hpp"
#include "laborcast/iehi.hpp"
#include "laborcast/metrics.hpp"

namespace laborcast {

// Every CSV starts with a "# <schema>/<version>" line followed by the column
// header. Layouts are documented in docs/csv_formats.md.
inline constexpr std::string_view kMetricsSchema = "laborcast-metrics/1";
inline constexpr std::string_view kBaselinesSchema = "laborcast-baselines/1";
inline constexpr std::string_view kIehiSchema = "laborcast-iehi/1";
inline constexpr std::string_view kPredictionsSchema = "laborcast-predictions/1";
inline constexpr std::string_view kForecastSchema = "laborcast-forecast/1";

struct IndustryMetrics {
  std::string industry;
  MetricReport report;
};

// industry,mse,mae,smape,rmse,n and a trailing mape column when `diagnostic`.
void write_metric_table_csv(std::ostream& out, std::span<const IndustryMetrics> rows, bool diagnostic = false);

// industry,oracle_rmse,oracle_smape,persistence_rmse,persistence_smape with a
// final "Average" row.
void write_baseline_table_csv(std::ostream& out, const BaselineTable& table);

// One row per industry with score, rank and sub-scores, then the
// "# spearman_rho=..." and "# p_value=..." footer when a validation is given.
void write_iehi_csv(std::ostream& out, const IEHIReport& report, const std::optional<Correlation>& validation);

struct PredictionRow {
  std::chrono::sys_days anchor;
  std::chrono::sys_days week;
  std::size_t step = 0;  // 1..h
  double actual = 0.0;
  double predicted = 0.0;
};

// anchor_week,target_week,step,actual,predicted (normalized changes).
void write_predictions_csv(std::ostream& out, std::span<const PredictionRow> rows);

// week_start,change,level
void write_forecast_csv(std::ostream& out, const Forecast& forecast);

struct RankedError {
  std::string industry;
  double smape = 0.0;
  double iehi_rank = 0.0;
};

// Reads industry,smape,iehi_rank rows (the published ranking fixture).
// Throws ParseError.
std::vector<RankedError> read_ranked_errors_csv(std::istream& in);

}  // namespace laborcast
