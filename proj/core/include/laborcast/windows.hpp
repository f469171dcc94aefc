// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <chrono>
#include <cstddef>
#include <span>
#include <vector>

#include "laborcast/panel.hpp"
#include "laborcast/tensor.hpp"

namespace laborcast {

// Half-open row range of a panel.
struct RowSpan {
  std::size_t begin = 0;
  std::size_t end = 0;
  std::size_t size() const noexcept { return end > begin ? end - begin : 0; }
  bool operator==(const RowSpan&) const = default;
};

struct WindowSpec {
  std::size_t window = 28;  // input rows T
  std::size_t horizon = 7;  // target steps h
  std::size_t target_index = 0;  // feature whose first difference is forecast
  std::size_t stride = 1;  // rows between consecutive window starts
};

// Z-score statistics. Features are normalized levels; the target is the
// normalized first difference of the target feature.
struct NormalizationStats {
  std::vector<double> mean;
  std::vector<double> stddev;
  double target_mean = 0.0;
  double target_std = 1.0;
  RowSpan span;  // rows the statistics were computed from

  double normalize(std::size_t feature, double v) const { return (v - mean[feature]) / stddev[feature]; }
  double normalize_change(double v) const { return (v - target_mean) / target_std; }
  double denormalize_change(double z) const { return z * target_std + target_mean; }

  bool operator==(const NormalizationStats&) const = default;
};

struct Window {
  std::size_t start = 0;  // first input row
  std::vector<double> inputs;  // T x F, normalized, row-major
  std::vector<double> targets;  // h normalized changes after the window
  std::vector<double> history;  // T - 1 normalized changes observed inside the window
  std::chrono::sys_days anchor;  // week of the last input row
  std::vector<std::chrono::sys_days> target_weeks;
  double anchor_level = 0.0;  // raw target level at the anchor
};

struct WindowBatch {
  WindowSpec spec;
  std::size_t features = 0;
  NormalizationStats stats;
  std::vector<Window> windows;

  std::size_t size() const noexcept { return windows.size(); }
  bool empty() const noexcept { return windows.empty(); }
  // Row ranges a window touches.
  RowSpan input_rows(const Window& w) const { return {w.start, w.start + spec.window}; }
  RowSpan target_rows(const Window& w) const {
    return {w.start + spec.window, w.start + spec.window + spec.horizon};
  }
  // [n x T x F] over the listed windows (all when empty).
  Tensor inputs(std::span<const std::size_t> which = {}) const;
  // [n x h]
  Tensor targets(std::span<const std::size_t> which = {}) const;
};

// Number of windows a panel of `rows` rows yields: (rows - T - h) / stride + 1,
// zero when the panel is shorter than T + h.
std::size_t window_count(std::size_t rows, const WindowSpec& spec);

// Per-feature mean/std and target-change mean/std over `span`. Throws
// DataError naming a feature (or the target change) with zero spread.
NormalizationStats compute_stats(const TimeSeriesPanel& panel, std::size_t target_index, RowSpan span);

// Sliding windows normalized with statistics from `stats_span` only. Throws
// WindowError when the panel is shorter than T + h.
WindowBatch make_windows(const TimeSeriesPanel& panel, const WindowSpec& spec, RowSpan stats_span);
WindowBatch make_windows(const TimeSeriesPanel& panel, const WindowSpec& spec, const NormalizationStats& stats);

struct SplitPlan {
  RowSpan train;  // window index ranges
  RowSpan val;
  RowSpan test;
  std::size_t purged = 0;  // boundary windows dropped to avoid leakage
};

// Floor allocation: n_val = floor(n * val), n_test = floor(n * test), train
// keeps the rest; then windows at the end of train (and of val) whose target
// rows reach the first input row of the next segment are dropped.
SplitPlan plan_split(std::span<const std::size_t> starts, std::size_t window, std::size_t horizon,
                     double val_fraction, double test_fraction);

struct DataSplit {
  WindowBatch train;
  WindowBatch val;
  WindowBatch test;
  std::size_t purged = 0;
};

// Contiguous chronological segments; see plan_split. Throws DataError with
// fewer than three windows or an empty training segment.
DataSplit chronological_split(const WindowBatch& windows, double val_fraction, double test_fraction);

// Windows, split and normalization for one panel, with statistics taken from
// the rows covered by the training windows only.
DataSplit prepare_dataset(const TimeSeriesPanel& panel, const WindowSpec& spec, double val_fraction,
                          double test_fraction);

}  // namespace laborcast
