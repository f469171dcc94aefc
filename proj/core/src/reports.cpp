// SPDX-License-Identifier: Apache-2.0
#include "laborcast/reports.hpp"

#include <istream>
#include <ostream>

#include "laborcast/csv.hpp"
#include "laborcast/error.hpp"

namespace laborcast {
namespace {

void schema_line(std::ostream& out, std::string_view schema) { out << "# " << schema << '\n'; }

}  // namespace

void write_metric_table_csv(std::ostream& out, std::span<const IndustryMetrics> rows, bool diagnostic) {
  schema_line(out, kMetricsSchema);
  out << "industry,mse,mae,smape,rmse,n" << (diagnostic ? ",mape" : "") << '\n';
  for (const auto& r : rows) {
    out << r.industry << ',' << format_number(r.report.mse) << ',' << format_number(r.report.mae) << ','
        << format_number(r.report.smape) << ',' << format_number(r.report.rmse) << ',' << r.report.n;
    if (diagnostic) out << ',' << (r.report.mape ? format_number(*r.report.mape) : std::string());
    out << '\n';
  }
}

void write_baseline_table_csv(std::ostream& out, const BaselineTable& table) {
  schema_line(out, kBaselinesSchema);
  out << "industry,oracle_rmse,oracle_smape,persistence_rmse,persistence_smape\n";
  auto row = [&](const BaselineRow& r) {
    out << r.industry << ',' << format_number(r.oracle.rmse) << ',' << format_number(r.oracle.smape) << ','
        << format_number(r.persistence.rmse) << ',' << format_number(r.persistence.smape) << '\n';
  };
  for (const auto& r : table.rows) row(r);
  row(table.average);
}

void write_iehi_csv(std::ostream& out, const IEHIReport& report, const std::optional<Correlation>& validation) {
  schema_line(out, kIehiSchema);
  out << "industry,score,rank,volatility_score,separation_score,hiring_score,trend_score,"
         "volatility,separation_rate,hiring_std,trend\n";
  for (const auto& e : report.entries) {
    out << e.industry << ',' << format_number(e.score) << ',' << format_number(e.rank) << ','
        << format_number(e.components.volatility) << ',' << format_number(e.components.separation) << ','
        << format_number(e.components.hiring) << ',' << format_number(e.components.trend) << ','
        << format_number(e.raw.volatility) << ',' << format_number(e.raw.separation) << ','
        << format_number(e.raw.hiring) << ',' << format_number(e.raw.trend) << '\n';
  }
  out << "# weights=" << format_number(report.weights.volatility) << ';' << format_number(report.weights.separation)
      << ';' << format_number(report.weights.hiring) << ';' << format_number(report.weights.trend)
      << " volatility_window=" << report.volatility_window << '\n';
  if (validation) {
    out << "# spearman_rho=" << format_number(validation->rho) << '\n';
    out << "# p_value=" << format_number(validation->p_value) << '\n';
  }
}

void write_predictions_csv(std::ostream& out, std::span<const PredictionRow> rows) {
  schema_line(out, kPredictionsSchema);
  out << "anchor_week,target_week,step,actual,predicted\n";
  for (const auto& r : rows) {
    out << format_date(r.anchor) << ',' << format_date(r.week) << ',' << r.step << ',' << format_number(r.actual)
        << ',' << format_number(r.predicted) << '\n';
  }
}

void write_forecast_csv(std::ostream& out, const Forecast& forecast) {
  schema_line(out, kForecastSchema);
  out << "week_start,change,level\n";
  for (std::size_t i = 0; i < forecast.weeks.size(); ++i) {
    out << format_date(forecast.weeks[i]) << ',' << format_number(forecast.changes[i]) << ','
        << format_number(forecast.levels[i]) << '\n';
  }
}

std::vector<RankedError> read_ranked_errors_csv(std::istream& in) {
  std::vector<RankedError> rows;
  std::string line;
  bool header = false;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    const auto fields = split_csv_line(line);
    if (!header) {
      if (fields.size() != 3 || fields[0] != "industry" || fields[1] != "smape" || fields[2] != "iehi_rank") {
        throw ParseError("expected header industry,smape,iehi_rank");
      }
      header = true;
      continue;
    }
    if (fields.size() != 3) throw ParseError("line " + std::to_string(lineno) + ": expected 3 fields");
    rows.push_back({fields[0], parse_double(fields[1]), parse_double(fields[2])});
  }
  if (!header) throw ParseError("ranking fixture has no header");
  return rows;
}

}  // namespace laborcast
