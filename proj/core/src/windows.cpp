// SPDX-License-Identifier: Apache-2.0
#include "laborcast/windows.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "laborcast/error.hpp"

namespace laborcast {

namespace {

std::vector<std::size_t> all_indices(std::size_t n) {
  std::vector<std::size_t> idx(n);
  for (std::size_t i = 0; i < n; ++i) idx[i] = i;
  return idx;
}

void mean_std(std::span<const double> v, double& mean, double& sd) {
  mean = 0.0;
  for (double x : v) mean += x;
  mean /= static_cast<double>(v.size());
  double ss = 0.0;
  for (double x : v) ss += (x - mean) * (x - mean);
  sd = std::sqrt(ss / static_cast<double>(v.size()));
}

}  // namespace

Tensor WindowBatch::inputs(std::span<const std::size_t> which) const {
  const auto idx = which.empty() ? all_indices(windows.size()) : std::vector<std::size_t>(which.begin(), which.end());
  const std::size_t block = spec.window * features;
  Tensor out({idx.size(), spec.window, features});
  for (std::size_t i = 0; i < idx.size(); ++i)
    std::copy_n(windows.at(idx[i]).inputs.data(), block, out.data() + i * block);
  return out;
}

Tensor WindowBatch::targets(std::span<const std::size_t> which) const {
  const auto idx = which.empty() ? all_indices(windows.size()) : std::vector<std::size_t>(which.begin(), which.end());
  Tensor out({idx.size(), spec.horizon});
  for (std::size_t i = 0; i < idx.size(); ++i)
    std::copy_n(windows.at(idx[i]).targets.data(), spec.horizon, out.data() + i * spec.horizon);
  return out;
}

std::size_t window_count(std::size_t rows, const WindowSpec& spec) {
  const std::size_t need = spec.window + spec.horizon;
  if (rows < need || spec.stride == 0) return 0;
  return (rows - need) / spec.stride + 1;
}

NormalizationStats compute_stats(const TimeSeriesPanel& panel, std::size_t target_index, RowSpan span) {
  if (span.end > panel.size() || span.size() < 2) {
    throw DataError("statistics span [" + std::to_string(span.begin) + ", " + std::to_string(span.end) +
                    ") is not a usable range of a " + std::to_string(panel.size()) + "-row panel");
  }
  if (target_index >= kIndicatorCount) throw ContractError("target index out of range");
  NormalizationStats s;
  s.span = span;
  s.mean.resize(kIndicatorCount);
  s.stddev.resize(kIndicatorCount);
  for (std::size_t f = 0; f < kIndicatorCount; ++f) {
    const auto& col = panel.columns[f];
    mean_std(std::span<const double>(col.data() + span.begin, span.size()), s.mean[f], s.stddev[f]);
    if (!(s.stddev[f] > 0.0)) {
      throw DataError("feature " + std::string(indicator_name(f)) + " of " + panel.industry +
                      " is constant over the training span");
    }
  }
  const auto& y = panel.columns[target_index];
  std::vector<double> changes;
  for (std::size_t r = span.begin + 1; r < span.end; ++r) changes.push_back(y[r] - y[r - 1]);
  mean_std(changes, s.target_mean, s.target_std);
  if (!(s.target_std > 0.0)) {
    throw DataError("change series of " + std::string(indicator_name(target_index)) + " for " + panel.industry +
                    " is constant over the training span");
  }
  return s;
}

WindowBatch make_windows(const TimeSeriesPanel& panel, const WindowSpec& spec, RowSpan stats_span) {
  return make_windows(panel, spec, compute_stats(panel, spec.target_index, stats_span));
}

WindowBatch make_windows(const TimeSeriesPanel& panel, const WindowSpec& spec, const NormalizationStats& stats) {
  if (spec.window == 0 || spec.horizon == 0 || spec.stride == 0) {
    throw ContractError("window, horizon and stride must be positive");
  }
  if (panel.size() < spec.window + spec.horizon) {
    throw WindowError("panel " + panel.industry + " has " + std::to_string(panel.size()) +
                      " rows, windows need at least " + std::to_string(spec.window + spec.horizon));
  }
  const std::size_t F = kIndicatorCount;
  WindowBatch batch;
  batch.spec = spec;
  batch.features = F;
  batch.stats = stats;
  const auto& y = panel.columns[spec.target_index];
  const std::size_t n = window_count(panel.size(), spec);
  batch.windows.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    Window w;
    w.start = i * spec.stride;
    w.inputs.resize(spec.window * F);
    for (std::size_t t = 0; t < spec.window; ++t)
      for (std::size_t f = 0; f < F; ++f)
        w.inputs[t * F + f] = stats.normalize(f, panel.columns[f][w.start + t]);
    for (std::size_t t = 1; t < spec.window; ++t)
      w.history.push_back(stats.normalize_change(y[w.start + t] - y[w.start + t - 1]));
    const std::size_t last = w.start + spec.window - 1;
    w.anchor = panel.weeks[last];
    w.anchor_level = y[last];
    for (std::size_t k = 0; k < spec.horizon; ++k) {
      const std::size_t r = last + 1 + k;
      w.targets.push_back(stats.normalize_change(y[r] - y[r - 1]));
      w.target_weeks.push_back(panel.weeks[r]);
    }
    batch.windows.push_back(std::move(w));
  }
  return batch;
}

SplitPlan plan_split(std::span<const std::size_t> starts, std::size_t window, std::size_t horizon,
                     double val_fraction, double test_fraction) {
  if (!(val_fraction >= 0.0) || !(test_fraction >= 0.0) || val_fraction + test_fraction >= 1.0) {
    throw ContractError("split fractions must be non-negative and sum below 1");
  }
  const std::size_t n = starts.size();
  if (n < 3) throw DataError("need at least 3 windows to split, got " + std::to_string(n));
  // The epsilon keeps exact products such as 10 * 0.2 from flooring to 1.
  const auto n_val = static_cast<std::size_t>(std::floor(static_cast<double>(n) * val_fraction + 1e-9));
  const auto n_test = static_cast<std::size_t>(std::floor(static_cast<double>(n) * test_fraction + 1e-9));
  SplitPlan plan;
  plan.train = {0, n - n_val - n_test};
  plan.val = {plan.train.end, plan.train.end + n_val};
  plan.test = {plan.val.end, n};

  auto purge = [&](RowSpan& earlier, const RowSpan& later) {
    if (later.size() == 0) return;
    const std::size_t first_input = starts[later.begin];
    while (earlier.size() > 0 && starts[earlier.end - 1] + window + horizon > first_input) {
      --earlier.end;
      ++plan.purged;
    }
  };
  purge(plan.val, plan.test);
  purge(plan.train, plan.val.size() > 0 ? plan.val : plan.test);
  if (plan.train.size() == 0) throw DataError("training split is empty after removing overlapping windows");
  return plan;
}

namespace {

WindowBatch subset(const WindowBatch& all, RowSpan range) {
  WindowBatch out;
  out.spec = all.spec;
  out.features = all.features;
  out.stats = all.stats;
  out.windows.assign(all.windows.begin() + static_cast<std::ptrdiff_t>(range.begin),
                     all.windows.begin() + static_cast<std::ptrdiff_t>(range.begin + range.size()));
  return out;
}

std::vector<std::size_t> starts_of(const WindowBatch& b) {
  std::vector<std::size_t> s;
  for (const auto& w : b.windows) s.push_back(w.start);
  return s;
}

}  // namespace

DataSplit chronological_split(const WindowBatch& windows, double val_fraction, double test_fraction) {
  const auto starts = starts_of(windows);
  const SplitPlan plan =
      plan_split(starts, windows.spec.window, windows.spec.horizon, val_fraction, test_fraction);
  DataSplit split;
  split.train = subset(windows, plan.train);
  split.val = subset(windows, plan.val);
  split.test = subset(windows, plan.test);
  split.purged = plan.purged;
  return split;
}

DataSplit prepare_dataset(const TimeSeriesPanel& panel, const WindowSpec& spec, double val_fraction,
                          double test_fraction) {
  const std::size_t n = window_count(panel.size(), spec);
  if (n == 0) {
    throw WindowError("panel " + panel.industry + " has " + std::to_string(panel.size()) +
                      " rows, windows need at least " + std::to_string(spec.window + spec.horizon));
  }
  std::vector<std::size_t> starts(n);
  for (std::size_t i = 0; i < n; ++i) starts[i] = i * spec.stride;
  const SplitPlan plan = plan_split(starts, spec.window, spec.horizon, val_fraction, test_fraction);
  const std::size_t last_train = starts[plan.train.end - 1];
  const RowSpan stats_span{0, last_train + spec.window + spec.horizon};
  const WindowBatch all = make_windows(panel, spec, stats_span);
  DataSplit split;
  split.train = subset(all, plan.train);
  split.val = subset(all, plan.val);
  split.test = subset(all, plan.test);
  split.purged = plan.purged;
  return split;
}

}  // namespace laborcast
