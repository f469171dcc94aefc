// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <cstring>
#include <fstream>
#include <sstream>

#include "laborcast/checkpoint.hpp"
#include "laborcast/error.hpp"
#include "laborcast/forecasting.hpp"
#include "laborcast/training.hpp"
#include "support.hpp"

namespace laborcast {
namespace {

LSTNetConfig seven_feature_config() {
  auto c = testing::mini_config();
  c.features = kIndicatorCount;
  return c;
}

Checkpoint sample_checkpoint(const TimeSeriesPanel& panel) {
  Checkpoint ck;
  ck.industry = panel.industry;
  ck.seed = 17;
  ck.best_epoch = 3;
  ck.config = seven_feature_config();
  ck.window = {ck.config.window, ck.config.horizon, 0, 1};
  ck.stats = compute_stats(panel, 0, RowSpan{0, panel.size()});
  ck.params = init_params(ck.config, ck.seed);
  return ck;
}

std::string bytes_of(const Checkpoint& ck) {
  std::ostringstream out;
  write_checkpoint(out, ck);
  return out.str();
}

bool bitwise_equal(const std::vector<double>& a, const std::vector<double>& b) {
  return a.size() == b.size() && std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0;
}

TEST(Checkpoint, RoundTripForecastsBitwise) {
  const auto panel = testing::wavy_panel(40);
  const auto ck = sample_checkpoint(panel);
  testing::TempDir dir("ckpt");
  const auto path = dir.path() / "nested" / "model.ckpt";
  save_checkpoint(path, ck);
  const auto back = load_checkpoint(path);
  EXPECT_EQ(back.industry, ck.industry);
  EXPECT_EQ(back.seed, ck.seed);
  EXPECT_EQ(back.best_epoch, ck.best_epoch);
  EXPECT_EQ(back.config, ck.config);
  EXPECT_TRUE(back.stats == ck.stats);
  EXPECT_EQ(back.window.window, ck.window.window);
  const auto a = forecast_change(panel, ck.params, ck.config, ck.stats);
  const auto b = forecast_change(panel, back.params, back.config, back.stats);
  EXPECT_TRUE(bitwise_equal(a.changes, b.changes));
  EXPECT_TRUE(bitwise_equal(a.levels, b.levels));
  EXPECT_EQ(bytes_of(back), bytes_of(ck));
}

TEST(Checkpoint, ProseProfileShapesRoundTrip) {
  Checkpoint ck;
  ck.config.window = 30;
  ck.config.conv_kernel = 7;
  ck.config.rnn_hidden = 64;
  ck.config.skip_lengths = {4, 24};
  ck.config.highway_window = 7;
  ck.window = {30, 7, 0, 1};
  ck.stats = compute_stats(testing::wavy_panel(50), 0, RowSpan{0, 50});
  ck.params = init_params(ck.config, 1);
  std::stringstream buf(bytes_of(ck));
  const auto back = read_checkpoint(buf);
  EXPECT_EQ(back.params.tensor_count(), 15u + 9u * 2u);
  EXPECT_EQ(bytes_of(back), bytes_of(ck));
}

TEST(Checkpoint, CorruptionDetected) {
  const auto ck = sample_checkpoint(testing::wavy_panel(40));
  const std::string good = bytes_of(ck);

  std::string flipped = good;
  flipped[good.size() / 2] ^= 0x01;
  std::istringstream a(flipped);
  EXPECT_THROW(read_checkpoint(a), ParseError);

  std::string magic = good;
  magic[0] = 'X';
  std::istringstream b(magic);
  EXPECT_THROW(read_checkpoint(b), ParseError);

  std::istringstream c(good.substr(0, good.size() - 20));
  EXPECT_THROW(read_checkpoint(c), ParseError);

  std::istringstream empty("");
  EXPECT_THROW(read_checkpoint(empty), ParseError);
}

TEST(Checkpoint, UnsupportedVersionNamed) {
  // Rewrite the version field and fix up the checksum so only the version is wrong.
  const auto ck = sample_checkpoint(testing::wavy_panel(40));
  std::string bytes = bytes_of(ck);
  bytes[4] = 9;
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (std::size_t i = 0; i + 8 < bytes.size(); ++i) {
    h ^= static_cast<std::uint8_t>(bytes[i]);
    h *= 0x100000001b3ULL;
  }
  for (int i = 0; i < 8; ++i) bytes[bytes.size() - 8 + static_cast<std::size_t>(i)] = static_cast<char>(h >> (8 * i));
  std::istringstream in(bytes);
  try {
    read_checkpoint(in);
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find("version 9"), std::string::npos) << e.what();
  }
}

TEST(Checkpoint, MissingFileIsDataError) {
  EXPECT_THROW(load_checkpoint("/nonexistent/dir/model.ckpt"), DataError);
}

TEST(Forecast, ExactlyWindowRows) {
  const auto ck = sample_checkpoint(testing::wavy_panel(40));
  const auto panel = testing::wavy_panel(ck.config.window);
  const auto f = forecast_change(panel, ck.params, ck.config, ck.stats);
  EXPECT_EQ(f.anchor, panel.weeks.back());
  ASSERT_EQ(f.changes.size(), ck.config.horizon);
  EXPECT_EQ(f.weeks.front(), panel.weeks.back() + std::chrono::days{7});
  EXPECT_DOUBLE_EQ(f.levels[1], panel.columns[0].back() + f.changes[0] + f.changes[1]);
  EXPECT_THROW(forecast_change(testing::wavy_panel(ck.config.window - 1), ck.params, ck.config, ck.stats),
               WindowError);
}

TEST(Forecast, NearConstantPanelStaysFlat) {
  // Exactly constant columns cannot be standardized, so each column carries
  // a tiny zero-mean wobble around its level.
  Rng rng(6);
  std::vector<double> wobble(400 * kIndicatorCount);
  for (auto& v : wobble) v = 1e-6 * rng.normal();
  const auto panel = testing::make_panel(400, [&](std::size_t r, std::size_t f) {
    return 100.0 + 10.0 * static_cast<double>(f) + wobble[r * kIndicatorCount + f];
  });
  const auto config = seven_feature_config();
  const WindowSpec spec{config.window, config.horizon, 0, 1};
  const auto split = prepare_dataset(panel, spec, 0.2, 0.2);
  TrainConfig tc;
  tc.epochs = 20;
  tc.batch_size = 32;
  tc.learning_rate = 0.01;
  const auto result = train(config, init_params(config, 3), split.train, split.val, tc);
  const auto f = forecast_change(panel, result.params, config, split.train.stats);
  for (double level : f.levels) EXPECT_NEAR(level, 100.0, 1e-4);
}

}  // namespace
}  // namespace laborcast
