// SPDX-License-Identifier: Apache-2.0
#include "laborcast/metrics.hpp"

#include <algorithm>
#include <boost/math/distributions/students_t.hpp>
#include <cmath>
#include <numeric>
#include <string>

#include "laborcast/error.hpp"

namespace laborcast {

namespace {

void check_pair(std::span<const double> a, std::span<const double> b, const char* name) {
  if (a.size() != b.size()) {
    throw ContractError(std::string(name) + ": length mismatch (" + std::to_string(a.size()) + " vs " +
                        std::to_string(b.size()) + ")");
  }
  if (a.empty()) throw ContractError(std::string(name) + ": empty series");
}

}  // namespace

double smape(std::span<const double> actual, std::span<const double> predicted) {
  check_pair(actual, predicted, "smape");
  double total = 0.0;
  for (std::size_t i = 0; i < actual.size(); ++i) {
    const double denom = (std::abs(actual[i]) + std::abs(predicted[i])) / 2.0;
    if (denom == 0.0) continue;
    total += std::abs(actual[i] - predicted[i]) / denom;
  }
  return 100.0 * total / static_cast<double>(actual.size());
}

double mse(std::span<const double> actual, std::span<const double> predicted) {
  check_pair(actual, predicted, "mse");
  double total = 0.0;
  for (std::size_t i = 0; i < actual.size(); ++i) {
    const double d = actual[i] - predicted[i];
    total += d * d;
  }
  return total / static_cast<double>(actual.size());
}

double rmse(std::span<const double> actual, std::span<const double> predicted) {
  check_pair(actual, predicted, "rmse");
  return std::sqrt(mse(actual, predicted));
}

double mae(std::span<const double> actual, std::span<const double> predicted) {
  check_pair(actual, predicted, "mae");
  double total = 0.0;
  for (std::size_t i = 0; i < actual.size(); ++i) total += std::abs(actual[i] - predicted[i]);
  return total / static_cast<double>(actual.size());
}

std::optional<double> mape(std::span<const double> actual, std::span<const double> predicted) {
  check_pair(actual, predicted, "mape");
  double total = 0.0;
  std::size_t used = 0;
  for (std::size_t i = 0; i < actual.size(); ++i) {
    if (actual[i] == 0.0) continue;
    total += std::abs((actual[i] - predicted[i]) / actual[i]);
    ++used;
  }
  if (used == 0) return std::nullopt;
  return 100.0 * total / static_cast<double>(used);
}

MetricReport evaluate_metrics(std::span<const double> actual, std::span<const double> predicted) {
  MetricReport r;
  r.smape = smape(actual, predicted);
  r.mse = mse(actual, predicted);
  r.rmse = std::sqrt(r.mse);
  r.mae = mae(actual, predicted);
  r.mape = mape(actual, predicted);
  r.n = actual.size();
  return r;
}

std::vector<double> average_ranks(std::span<const double> values) {
  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t i, std::size_t j) { return values[i] < values[j]; });
  std::vector<double> ranks(values.size());
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i;
    while (j + 1 < order.size() && values[order[j + 1]] == values[order[i]]) ++j;
    const double avg = (static_cast<double>(i + 1) + static_cast<double>(j + 1)) / 2.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = avg;
    i = j + 1;
  }
  return ranks;
}

double pearson(std::span<const double> a, std::span<const double> b) {
  check_pair(a, b, "pearson");
  const double n = static_cast<double>(a.size());
  const double ma = std::accumulate(a.begin(), a.end(), 0.0) / n;
  const double mb = std::accumulate(b.begin(), b.end(), 0.0) / n;
  double sab = 0.0, saa = 0.0, sbb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    sab += (a[i] - ma) * (b[i] - mb);
    saa += (a[i] - ma) * (a[i] - ma);
    sbb += (b[i] - mb) * (b[i] - mb);
  }
  if (saa == 0.0 || sbb == 0.0) {
    throw UndefinedCorrelationError("correlation undefined: a list has zero variance");
  }
  return sab / std::sqrt(saa * sbb);
}

Correlation spearman_rho(std::span<const double> a, std::span<const double> b) {
  check_pair(a, b, "spearman_rho");
  if (a.size() < 3) throw ContractError("spearman_rho: need at least 3 pairs");
  const auto ra = average_ranks(a);
  const auto rb = average_ranks(b);
  Correlation c;
  c.rho = std::clamp(pearson(ra, rb), -1.0, 1.0);
  const double df = static_cast<double>(a.size()) - 2.0;
  if (std::abs(c.rho) >= 1.0) {
    c.p_value = 0.0;
    return c;
  }
  const double t = c.rho * std::sqrt(df / (1.0 - c.rho * c.rho));
  const boost::math::students_t dist(df);
  c.p_value = 2.0 * boost::math::cdf(boost::math::complement(dist, std::abs(t)));
  return c;
}

double spearman_exact_p(std::span<const double> a, std::span<const double> b) {
  check_pair(a, b, "spearman_exact_p");
  if (a.size() < 3 || a.size() > 10) throw ContractError("spearman_exact_p: need 3 <= n <= 10");
  const auto ra = average_ranks(a);
  auto rb = average_ranks(b);
  const double observed = std::abs(pearson(ra, rb));
  std::sort(rb.begin(), rb.end());
  std::size_t hits = 0, total = 0;
  do {
    ++total;
    if (std::abs(pearson(ra, rb)) >= observed - 1e-12) ++hits;
  } while (std::next_permutation(rb.begin(), rb.end()));
  return static_cast<double>(hits) / static_cast<double>(total);
}

}  // namespace laborcast
