// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <chrono>
#include <cmath>
#include <filesystem>
#include <functional>
#include <string>

#include "laborcast/lstnet.hpp"
#include "laborcast/panel.hpp"
#include "laborcast/rng.hpp"

namespace laborcast::testing {

inline std::chrono::sys_days monday(int y, unsigned m, unsigned d) {
  return std::chrono::sys_days{std::chrono::year{y} / std::chrono::month{m} / std::chrono::day{d}};
}

// Panel whose cell (row, feature) is fn(row, feature).
inline TimeSeriesPanel make_panel(std::size_t rows, const std::function<double(std::size_t, std::size_t)>& fn,
                                  std::string industry = "Construction") {
  TimeSeriesPanel p;
  p.industry = std::move(industry);
  p.resize(rows);
  const auto start = monday(2010, 1, 4);
  for (std::size_t r = 0; r < rows; ++r) {
    p.weeks[r] = start + std::chrono::weeks(r);
    for (std::size_t f = 0; f < kIndicatorCount; ++f) {
      p.columns[f][r] = fn(r, f);
      p.interpolated[f][r] = 0;
    }
  }
  return p;
}

// Smooth, non-degenerate multivariate panel.
inline TimeSeriesPanel wavy_panel(std::size_t rows, std::uint64_t seed = 1) {
  Rng rng(seed);
  std::vector<double> noise(rows * kIndicatorCount);
  for (auto& v : noise) v = rng.normal();
  return make_panel(rows, [noise](std::size_t r, std::size_t f) {
    const double t = static_cast<double>(r);
    return 50.0 + 10.0 * static_cast<double>(f + 1) + 3.0 * std::sin(t * 0.7 + static_cast<double>(f)) +
           0.01 * t + 0.2 * noise[r * kIndicatorCount + f];
  });
}

inline LSTNetConfig mini_config() {
  LSTNetConfig c;
  c.window = 10;
  c.features = 3;
  c.conv_channels = 4;
  c.conv_kernel = 3;
  c.rnn_hidden = 5;
  c.skip_lengths = {2};
  c.skip_hidden = 3;
  c.highway_window = 3;
  c.horizon = 2;
  c.target_index = 0;
  return c;
}

class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    path_ = std::filesystem::temp_directory_path() /
            ("laborcast_" + tag + "_" + std::to_string(std::chrono::steady_clock::now().time_since_epoch().count()));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

}  // namespace laborcast::testing
