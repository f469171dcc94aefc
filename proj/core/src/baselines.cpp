// SPDX-License-Identifier: Apache-2.0
#include "laborcast/baselines.hpp"

#include <numeric>

#include "laborcast/error.hpp"

namespace laborcast {

std::vector<double> persistence_forecast(std::span<const double> observed, std::size_t horizon) {
  if (observed.empty()) throw ContractError("persistence forecast needs at least one observation");
  return std::vector<double>(horizon, observed.back());
}

std::vector<double> oracle_forecast(std::span<const double> future, std::size_t horizon) {
  if (future.size() != horizon || horizon == 0) {
    throw ContractError("oracle forecast needs exactly " + std::to_string(horizon) + " future values, got " +
                        std::to_string(future.size()));
  }
  const double mean = std::accumulate(future.begin(), future.end(), 0.0) / static_cast<double>(horizon);
  return std::vector<double>(horizon, mean);
}

BaselineForecast run_baseline(BaselineKind kind, const WindowBatch& windows) {
  BaselineForecast out;
  out.kind = kind;
  const std::size_t h = windows.spec.horizon;
  for (const auto& w : windows.windows) {
    out.predictions.push_back(kind == BaselineKind::kPersistence ? persistence_forecast(w.history, h)
                                                                 : oracle_forecast(w.targets, h));
    out.actuals.push_back(w.targets);
  }
  return out;
}

MetricReport score(const BaselineForecast& forecast) {
  std::vector<double> actual, predicted;
  for (std::size_t i = 0; i < forecast.actuals.size(); ++i) {
    actual.insert(actual.end(), forecast.actuals[i].begin(), forecast.actuals[i].end());
    predicted.insert(predicted.end(), forecast.predictions[i].begin(), forecast.predictions[i].end());
  }
  return evaluate_metrics(actual, predicted);
}

BaselineTable make_baseline_table(std::vector<BaselineRow> rows) {
  BaselineTable table;
  table.rows = std::move(rows);
  table.average.industry = "Average";
  const double n = static_cast<double>(table.rows.size());
  if (table.rows.empty()) return table;
  for (const auto& r : table.rows) {
    table.average.oracle.rmse += r.oracle.rmse / n;
    table.average.oracle.smape += r.oracle.smape / n;
    table.average.oracle.mae += r.oracle.mae / n;
    table.average.oracle.mse += r.oracle.mse / n;
    table.average.oracle.n += r.oracle.n;
    table.average.persistence.rmse += r.persistence.rmse / n;
    table.average.persistence.smape += r.persistence.smape / n;
    table.average.persistence.mae += r.persistence.mae / n;
    table.average.persistence.mse += r.persistence.mse / n;
    table.average.persistence.n += r.persistence.n;
  }
  return table;
}

BaselineTable run_baseline_suite(std::span<const TimeSeriesPanel> panels, const WindowSpec& spec,
                                 double val_fraction, double test_fraction) {
  std::vector<BaselineRow> rows;
  for (const auto& panel : panels) {
    const DataSplit split = prepare_dataset(panel, spec, val_fraction, test_fraction);
    const WindowBatch& eval = split.test.empty() ? split.train : split.test;
    BaselineRow row;
    row.industry = panel.industry;
    row.oracle = score(run_baseline(BaselineKind::kOracle, eval));
    row.persistence = score(run_baseline(BaselineKind::kPersistence, eval));
    rows.push_back(std::move(row));
  }
  return make_baseline_table(std::move(rows));
}

}  // namespace laborcast
