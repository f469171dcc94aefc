// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string_view>
#include <vector>

#include "laborcast/lstnet.hpp"
#include "laborcast/tape.hpp"
#include "laborcast/windows.hpp"

namespace laborcast {

enum class OptimizerKind { kAdam, kSgd };

struct TrainConfig {
  std::size_t batch_size = 128;
  std::size_t epochs = 100;
  double learning_rate = 0.001;
  std::uint64_t seed = 42;
  double val_fraction = 0.2;
  double test_fraction = 0.2;
  OptimizerKind optimizer = OptimizerKind::kAdam;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  double clip_norm = 10.0;  // global gradient norm; <= 0 disables

  // Throws ContractError.
  void validate() const;
  bool operator==(const TrainConfig&) const = default;
};

struct EpochRecord {
  std::size_t epoch = 0;  // 1-based
  double train_loss = 0.0;
  double val_loss = 0.0;
  double seconds = 0.0;
  std::size_t clipped_batches = 0;
};

struct TrainLog {
  std::vector<EpochRecord> epochs;
  double initial_train_loss = 0.0;
  std::size_t best_epoch = 0;  // 0 when no epoch ran

  // Same epochs and losses; wall-clock seconds are ignored.
  bool same_losses(const TrainLog& other) const;
};

inline constexpr std::string_view kTrainLogCsvHeader = "epoch,train_loss,val_loss,seconds";
void write_train_log_csv(std::ostream& out, const TrainLog& log);

// Mean squared difference; pred and target must have equal sizes.
Var mse_loss(Tape& tape, Var pred, Var target);
Tensor mse_loss(const Tensor& pred, const Tensor& target);

// MSE of the model over every window of a batch, evaluated in chunks.
double evaluate_loss(const LSTNetParams& params, const LSTNetConfig& config, const WindowBatch& batch);

struct TrainResult {
  LSTNetParams params;
  TrainLog log;
};

// Mini-batch training with MSE loss. Training windows are reshuffled every
// epoch from the seed; the returned parameters are those of the epoch with
// the lowest validation loss (training loss when there is no validation
// split). Throws DataError on an empty training split and DivergenceError
// on a non-finite loss. `on_event` receives human-readable notices such as
// gradient clipping.
TrainResult train(const LSTNetConfig& config, LSTNetParams initial, const WindowBatch& train_windows,
                  const WindowBatch& val_windows, const TrainConfig& cfg,
                  const std::function<void(std::string_view)>& on_event = {});

// One optimizer state for a list of tensors, exposed for testing the update
// rule on its own.
class Optimizer {
 public:
  Optimizer(const TrainConfig& cfg, const std::vector<Tensor*>& params);
  // Applies grads (one buffer per parameter, same order) in place.
  void step(const std::vector<std::vector<double>>& grads);

 private:
  TrainConfig cfg_;
  std::vector<Tensor*> params_;
  std::vector<std::vector<double>> m_;
  std::vector<std::vector<double>> v_;
  std::uint64_t t_ = 0;
};

// Scales grads in place so their global L2 norm is at most max_norm. Returns
// true when scaling happened.
bool clip_global_norm(std::vector<std::vector<double>>& grads, double max_norm);

}  // namespace laborcast
