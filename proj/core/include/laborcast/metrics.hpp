// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace laborcast {

// Forecast error metrics over paired series. All of them require equal,
// nonzero lengths and throw ContractError otherwise.

// Symmetric MAPE in percent, bounded to [0, 200]. A term whose actual and
// predicted values are both exactly zero contributes zero error.
double smape(std::span<const double> actual, std::span<const double> predicted);
double rmse(std::span<const double> actual, std::span<const double> predicted);
double mae(std::span<const double> actual, std::span<const double> predicted);
double mse(std::span<const double> actual, std::span<const double> predicted);
// Diagnostic only. Terms with a zero actual value are skipped; returns nullopt
// when every actual value is zero.
std::optional<double> mape(std::span<const double> actual, std::span<const double> predicted);

struct MetricReport {
  double smape = 0.0;
  double rmse = 0.0;
  double mae = 0.0;
  double mse = 0.0;
  std::optional<double> mape;
  std::size_t n = 0;
};

MetricReport evaluate_metrics(std::span<const double> actual, std::span<const double> predicted);

// 1-based ranks; tied values share the average of the ranks they span.
std::vector<double> average_ranks(std::span<const double> values);

struct Correlation {
  double rho = 0.0;
  double p_value = 1.0;
};

// Spearman's rank correlation: Pearson correlation of average ranks, with a
// two-sided p-value from the t approximation on n - 2 degrees of freedom.
// Requires n >= 3; throws UndefinedCorrelationError when either list has no
// rank variance.
Correlation spearman_rho(std::span<const double> a, std::span<const double> b);

// Two-sided permutation p-value for Spearman's rho by enumerating every
// permutation of b's ranks. Only for n <= 10.
double spearman_exact_p(std::span<const double> a, std::span<const double> b);

double pearson(std::span<const double> a, std::span<const double> b);

}  // namespace laborcast
