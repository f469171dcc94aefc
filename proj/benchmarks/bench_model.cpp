// SPDX-License-Identifier: Apache-2.0
#include <benchmark/benchmark.h>

#include "laborcast/lstnet.hpp"
#include "laborcast/rng.hpp"
#include "laborcast/synthetic.hpp"
#include "laborcast/tape.hpp"
#include "laborcast/training.hpp"
#include "laborcast/windows.hpp"

namespace laborcast {
namespace {

// 0 = appendix shape (T28 k6 H100, skip inactive), 1 = prose shape (T30 k7 H64, skips 4 and 24).
LSTNetConfig shape(int which) {
  LSTNetConfig c;
  if (which == 1) {
    c.window = 30;
    c.conv_kernel = 7;
    c.rnn_hidden = 64;
    c.skip_lengths = {4, 24};
    c.highway_window = 7;
  }
  return c;
}

Tensor batch(const LSTNetConfig& c, std::size_t n) {
  Rng rng(1);
  Tensor x({n, c.window, c.features});
  for (auto& v : x.values()) v = rng.normal();
  return x;
}

void BM_Forward(benchmark::State& state) {
  const auto c = shape(static_cast<int>(state.range(0)));
  const auto p = init_params(c, 1);
  const auto x = batch(c, static_cast<std::size_t>(state.range(1)));
  for (auto _ : state) benchmark::DoNotOptimize(predict(x, p, c));
  state.SetItemsProcessed(state.iterations() * state.range(1));
}
BENCHMARK(BM_Forward)->ArgsProduct({{0, 1}, {1, 128}})->Unit(benchmark::kMicrosecond);

void BM_ForwardBackward(benchmark::State& state) {
  const auto c = shape(static_cast<int>(state.range(0)));
  const auto p = init_params(c, 1);
  const auto x = batch(c, 128);
  const Tensor target({128, c.horizon});
  for (auto _ : state) {
    Tape tape;
    const auto g = forward(tape, x, p, c, true);
    tape.backward(mse_loss(tape, g.prediction, tape.constant(target)));
    benchmark::DoNotOptimize(tape.grad(g.params[0]).data());
  }
  state.SetItemsProcessed(state.iterations() * 128);
}
BENCHMARK(BM_ForwardBackward)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_Conv2d(benchmark::State& state) {
  const auto c = shape(0);
  const auto p = init_params(c, 1);
  const auto x = batch(c, 128);
  for (auto _ : state) {
    Tape tape;
    benchmark::DoNotOptimize(tape.value(tape.conv2d(tape.constant(x), tape.leaf(p.conv_weight, false),
                                                    tape.leaf(p.conv_bias, false)))
                                 .data());
  }
}
BENCHMARK(BM_Conv2d)->Unit(benchmark::kMicrosecond);

void BM_TrainEpoch(benchmark::State& state) {
  const auto c = shape(0);
  SyntheticOptions o;
  o.weeks = 900;
  const auto panel = synthetic_panel(0, o);
  const auto split = prepare_dataset(panel, WindowSpec{c.window, c.horizon, 0, 1}, 0.2, 0.2);
  TrainConfig tc;
  tc.epochs = 1;
  for (auto _ : state) benchmark::DoNotOptimize(train(c, init_params(c, 1), split.train, split.val, tc));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(split.train.size()));
}
BENCHMARK(BM_TrainEpoch)->Unit(benchmark::kMillisecond)->Iterations(3);

}  // namespace
}  // namespace laborcast
