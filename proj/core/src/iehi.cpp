// SPDX-License-Identifier: Apache-2.0
#include "laborcast/iehi.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "laborcast/error.hpp"

namespace laborcast {

void IEHIWeights::validate() const {
  const double w[] = {volatility, separation, hiring, trend};
  for (double x : w)
    if (!(x >= 0.0)) throw ContractError("IEHI weights must be non-negative");
  const double total = volatility + separation + hiring + trend;
  if (std::abs(total - 1.0) > 1e-9) throw ContractError("IEHI weights must sum to 1");
}

double smoothed_volatility(std::span<const double> trajectory, std::size_t window) {
  if (window < 2 || trajectory.size() < window) {
    throw ContractError("smoothed volatility needs window >= 2 and at least " + std::to_string(window) +
                        " points, got " + std::to_string(trajectory.size()));
  }
  double total = 0.0;
  const std::size_t count = trajectory.size() - window + 1;
  for (std::size_t i = 0; i < count; ++i) {
    const auto w = trajectory.subspan(i, window);
    const double mean = std::accumulate(w.begin(), w.end(), 0.0) / static_cast<double>(window);
    double ss = 0.0;
    for (double v : w) ss += (v - mean) * (v - mean);
    total += std::sqrt(ss / static_cast<double>(window - 1));
  }
  return total / static_cast<double>(count);
}

std::vector<double> rank_descending(std::span<const double> scores) {
  std::vector<double> negated(scores.size());
  std::transform(scores.begin(), scores.end(), negated.begin(), [](double s) { return -s; });
  return average_ranks(negated);
}

namespace {

// Scaled to [0, 1] with 1 = healthy; a constant signal maps to 0.5.
std::vector<double> min_max(const std::vector<double>& v, bool higher_is_better) {
  const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
  std::vector<double> out(v.size(), 0.5);
  if (*hi == *lo) return out;
  const double range = *hi - *lo;
  for (std::size_t i = 0; i < v.size(); ++i)
    out[i] = higher_is_better ? (v[i] - *lo) / range : (*hi - v[i]) / range;
  return out;
}

}  // namespace

IEHIReport compute_iehi(std::span<const IEHIInputs> inputs, const IEHIWeights& weights,
                        std::size_t volatility_window) {
  weights.validate();
  if (inputs.size() < 2) throw RankingError("IEHI ranking needs at least two industries");
  std::vector<double> vol, sep, hire, trend;
  for (const auto& in : inputs) {
    if (in.trajectory.empty()) throw ContractError("IEHI input for " + in.industry + " has no trajectory");
    if (!std::isfinite(in.separation_rate) || !std::isfinite(in.hiring_stability) || !std::isfinite(in.trend)) {
      throw ContractError("IEHI input for " + in.industry + " has a non-finite rate");
    }
    vol.push_back(smoothed_volatility(in.trajectory, volatility_window));
    sep.push_back(in.separation_rate);
    hire.push_back(in.hiring_stability);
    trend.push_back(in.trend);
  }
  const auto s_vol = min_max(vol, false);
  const auto s_sep = min_max(sep, false);
  const auto s_hire = min_max(hire, false);
  const auto s_trend = min_max(trend, true);

  IEHIReport report;
  report.weights = weights;
  report.volatility_window = volatility_window;
  std::vector<double> scores;
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    IEHIEntry e;
    e.industry = inputs[i].industry;
    e.components = {s_vol[i], s_sep[i], s_hire[i], s_trend[i]};
    e.raw = {vol[i], sep[i], hire[i], trend[i]};
    e.score = weights.volatility * s_vol[i] + weights.separation * s_sep[i] + weights.hiring * s_hire[i] +
              weights.trend * s_trend[i];
    scores.push_back(e.score);
    report.entries.push_back(std::move(e));
  }
  const auto ranks = rank_descending(scores);
  for (std::size_t i = 0; i < ranks.size(); ++i) report.entries[i].rank = ranks[i];
  return report;
}

IEHIInputs iehi_inputs_from_panel(const TimeSeriesPanel& panel, RowSpan span, std::vector<double> trajectory,
                                  std::size_t window) {
  if (span.end > panel.size() || span.size() < window) {
    throw ContractError("IEHI span of " + std::to_string(span.size()) + " rows is shorter than the window " +
                        std::to_string(window));
  }
  const auto& emp = panel.column(Indicator::kEmployees);
  const auto& hires = panel.column(Indicator::kHires);
  const auto& seps = panel.column(Indicator::kSeparations);
  std::vector<double> hire_rate;
  double sep_total = 0.0;
  for (std::size_t r = span.begin; r < span.end; ++r) {
    if (!(emp[r] > 0.0)) throw DataError("non-positive employment level in " + panel.industry);
    hire_rate.push_back(hires[r] / emp[r]);
    sep_total += seps[r] / emp[r];
  }
  IEHIInputs in;
  in.industry = panel.industry;
  in.separation_rate = sep_total / static_cast<double>(span.size());
  in.hiring_stability = smoothed_volatility(hire_rate, window);
  in.trend = trajectory.empty() ? 0.0
                                : std::accumulate(trajectory.begin(), trajectory.end(), 0.0) /
                                      static_cast<double>(trajectory.size());
  in.trajectory = std::move(trajectory);
  return in;
}

Correlation validate_ranking(std::span<const IndustryValue> iehi_ranks, std::span<const IndustryValue> error_scores) {
  std::map<std::string, double> errors;
  for (const auto& [name, v] : error_scores) errors[name] = v;
  std::map<std::string, double> ranks;
  for (const auto& [name, v] : iehi_ranks) ranks[name] = v;
  std::string only_ranks, only_errors;
  for (const auto& [name, v] : ranks)
    if (!errors.contains(name)) only_ranks += (only_ranks.empty() ? "" : ", ") + name;
  for (const auto& [name, v] : errors)
    if (!ranks.contains(name)) only_errors += (only_errors.empty() ? "" : ", ") + name;
  if (!only_ranks.empty() || !only_errors.empty()) {
    throw JoinError("industry sets differ; only ranked: [" + only_ranks + "], only scored: [" + only_errors + "]");
  }
  std::vector<double> a, b;
  for (const auto& [name, v] : ranks) {
    a.push_back(v);
    b.push_back(errors[name]);
  }
  return spearman_rho(a, b);
}

}  // namespace laborcast
