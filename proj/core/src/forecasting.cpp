// SPDX-License-Identifier: Apache-2.0
#include "laborcast/forecasting.hpp"

#include <algorithm>
#include <string>

#include "laborcast/error.hpp"

namespace laborcast {

Forecast forecast_change(const TimeSeriesPanel& panel, const LSTNetParams& params, const LSTNetConfig& config,
                         const NormalizationStats& stats) {
  const std::size_t T = config.window, F = config.features;
  if (F != kIndicatorCount || stats.mean.size() != F) {
    throw DimensionError("model expects " + std::to_string(F) + " features, panel has " +
                         std::to_string(kIndicatorCount));
  }
  if (panel.size() < T) {
    throw WindowError("panel " + panel.industry + " has " + std::to_string(panel.size()) +
                      " rows, the model needs " + std::to_string(T));
  }
  const std::size_t first = panel.size() - T;
  Tensor x({1, T, F});
  for (std::size_t t = 0; t < T; ++t)
    for (std::size_t f = 0; f < F; ++f) x[t * F + f] = stats.normalize(f, panel.columns[f][first + t]);
  const Tensor pred = predict(x, params, config);

  Forecast out;
  out.industry = panel.industry;
  out.anchor = panel.weeks.back();
  double level = panel.columns[config.target_index].back();
  for (std::size_t k = 0; k < config.horizon; ++k) {
    const double change = stats.denormalize_change(pred[k]);
    level += change;
    out.weeks.push_back(out.anchor + std::chrono::days{7 * static_cast<long>(k + 1)});
    out.changes.push_back(change);
    out.levels.push_back(level);
  }
  return out;
}

std::vector<std::vector<double>> predict_windows(const WindowBatch& batch, const LSTNetParams& params,
                                                 const LSTNetConfig& config) {
  constexpr std::size_t kChunk = 256;
  std::vector<std::vector<double>> out;
  out.reserve(batch.size());
  for (std::size_t begin = 0; begin < batch.size(); begin += kChunk) {
    std::vector<std::size_t> idx;
    for (std::size_t i = begin; i < std::min(batch.size(), begin + kChunk); ++i) idx.push_back(i);
    const Tensor pred = predict(batch.inputs(idx), params, config);
    const std::size_t h = config.horizon;
    for (std::size_t i = 0; i < idx.size(); ++i)
      out.emplace_back(pred.values().begin() + static_cast<std::ptrdiff_t>(i * h),
                       pred.values().begin() + static_cast<std::ptrdiff_t>((i + 1) * h));
  }
  return out;
}

}  // namespace laborcast
