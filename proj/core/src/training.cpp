// SPDX-License-Identifier: Apache-2.0
#include "laborcast/training.hpp"

#include <algorithm>
#include <chrono>
#include <limits>
#include <span>
#include <cmath>
#include <numeric>
#include <ostream>
#include <string>

#include "laborcast/csv.hpp"
#include "laborcast/error.hpp"
#include "laborcast/rng.hpp"

namespace laborcast {

void TrainConfig::validate() const {
  if (batch_size < 1) throw ContractError("batch_size must be >= 1");
  if (!(learning_rate > 0.0)) throw ContractError("learning_rate must be > 0");
  if (!(val_fraction >= 0.0) || !(test_fraction >= 0.0) || val_fraction + test_fraction >= 1.0) {
    throw ContractError("val_fraction + test_fraction must lie in [0, 1)");
  }
  if (!(beta1 >= 0.0 && beta1 < 1.0) || !(beta2 >= 0.0 && beta2 < 1.0) || !(epsilon > 0.0)) {
    throw ContractError("Adam hyperparameters out of range");
  }
}

bool TrainLog::same_losses(const TrainLog& other) const {
  if (epochs.size() != other.epochs.size() || best_epoch != other.best_epoch ||
      initial_train_loss != other.initial_train_loss) {
    return false;
  }
  for (std::size_t i = 0; i < epochs.size(); ++i) {
    const auto& a = epochs[i];
    const auto& b = other.epochs[i];
    if (a.epoch != b.epoch || a.train_loss != b.train_loss || a.val_loss != b.val_loss ||
        a.clipped_batches != b.clipped_batches) {
      return false;
    }
  }
  return true;
}

void write_train_log_csv(std::ostream& out, const TrainLog& log) {
  out << kTrainLogCsvHeader << '\n';
  for (const auto& e : log.epochs) {
    out << e.epoch << ',' << format_number(e.train_loss) << ',' << format_number(e.val_loss) << ','
        << format_fixed(e.seconds, 3) << '\n';
  }
}

Var mse_loss(Tape& tape, Var pred, Var target) {
  const Tensor& p = tape.value(pred);
  const Tensor& t = tape.value(target);
  if (p.size() != t.size() || p.size() == 0) {
    throw DimensionError("mse_loss: prediction " + shape_to_string(p.shape()) + " vs target " +
                         shape_to_string(t.shape()));
  }
  Var target_view = target;
  if (p.shape() != t.shape()) target_view = tape.reshape(target, p.shape());
  const Var diff = tape.sub(pred, target_view);
  return tape.mean(tape.mul(diff, diff));
}

Tensor mse_loss(const Tensor& pred, const Tensor& target) {
  Tape tape;
  return tape.value(mse_loss(tape, tape.leaf(pred, false), tape.leaf(target, false)));
}

double evaluate_loss(const LSTNetParams& params, const LSTNetConfig& config, const WindowBatch& batch) {
  if (batch.empty()) return 0.0;
  constexpr std::size_t kChunk = 256;
  double total = 0.0;
  std::size_t count = 0;
  for (std::size_t begin = 0; begin < batch.size(); begin += kChunk) {
    std::vector<std::size_t> idx;
    for (std::size_t i = begin; i < std::min(batch.size(), begin + kChunk); ++i) idx.push_back(i);
    const Tensor pred = predict(batch.inputs(idx), params, config);
    const Tensor target = batch.targets(idx);
    for (std::size_t i = 0; i < pred.size(); ++i) {
      const double d = pred[i] - target[i];
      total += d * d;
    }
    count += pred.size();
  }
  return total / static_cast<double>(count);
}

Optimizer::Optimizer(const TrainConfig& cfg, const std::vector<Tensor*>& params) : cfg_(cfg), params_(params) {
  for (const Tensor* p : params_) {
    m_.emplace_back(p->size(), 0.0);
    v_.emplace_back(p->size(), 0.0);
  }
}

void Optimizer::step(const std::vector<std::vector<double>>& grads) {
  if (grads.size() != params_.size()) throw ContractError("optimizer: gradient count mismatch");
  ++t_;
  const double lr = cfg_.learning_rate;
  if (cfg_.optimizer == OptimizerKind::kSgd) {
    for (std::size_t i = 0; i < params_.size(); ++i) {
      auto v = params_[i]->values();
      for (std::size_t j = 0; j < v.size(); ++j) v[j] -= lr * grads[i][j];
    }
    return;
  }
  const double b1 = cfg_.beta1, b2 = cfg_.beta2;
  const double c1 = 1.0 - std::pow(b1, static_cast<double>(t_));
  const double c2 = 1.0 - std::pow(b2, static_cast<double>(t_));
  for (std::size_t i = 0; i < params_.size(); ++i) {
    auto v = params_[i]->values();
    auto& m = m_[i];
    auto& s = v_[i];
    const auto& g = grads[i];
    for (std::size_t j = 0; j < v.size(); ++j) {
      m[j] = b1 * m[j] + (1.0 - b1) * g[j];
      s[j] = b2 * s[j] + (1.0 - b2) * g[j] * g[j];
      v[j] -= lr * (m[j] / c1) / (std::sqrt(s[j] / c2) + cfg_.epsilon);
    }
  }
}

bool clip_global_norm(std::vector<std::vector<double>>& grads, double max_norm) {
  if (max_norm <= 0.0) return false;
  double sq = 0.0;
  for (const auto& g : grads)
    for (double x : g) sq += x * x;
  const double norm = std::sqrt(sq);
  if (!(norm > max_norm)) return false;
  const double scale = max_norm / norm;
  for (auto& g : grads)
    for (double& x : g) x *= scale;
  return true;
}

TrainResult train(const LSTNetConfig& config, LSTNetParams initial, const WindowBatch& train_windows,
                  const WindowBatch& val_windows, const TrainConfig& cfg,
                  const std::function<void(std::string_view)>& on_event) {
  cfg.validate();
  config.validate();
  audit_shapes(initial, config);
  if (train_windows.empty()) throw DataError("training split is empty");

  TrainResult result;
  result.log.initial_train_loss = evaluate_loss(initial, config, train_windows);
  result.params = initial;
  if (cfg.epochs == 0) return result;

  LSTNetParams params = std::move(initial);
  std::vector<Tensor*> tensors;
  params.visit(config, [&](const std::string&, Tensor& t) { tensors.push_back(&t); });
  Optimizer opt(cfg, tensors);
  Rng rng(cfg.seed ^ 0x9e3779b97f4a7c15ULL);

  std::vector<std::size_t> order(train_windows.size());
  std::iota(order.begin(), order.end(), 0);
  double best = std::numeric_limits<double>::infinity();
  double last_finite = result.log.initial_train_loss;
  const bool has_val = !val_windows.empty();

  for (std::size_t epoch = 1; epoch <= cfg.epochs; ++epoch) {
    const auto t0 = std::chrono::steady_clock::now();
    rng.shuffle(order.begin(), order.end());
    double loss_sum = 0.0;
    std::size_t clipped = 0;
    for (std::size_t begin = 0; begin < order.size(); begin += cfg.batch_size) {
      const std::size_t end = std::min(order.size(), begin + cfg.batch_size);
      const std::span<const std::size_t> idx(order.data() + begin, end - begin);
      const Tensor x = train_windows.inputs(idx);
      const Tensor y = train_windows.targets(idx);
      Tape tape;
      const ForwardGraph graph = forward(tape, x, params, config, true);
      const Var loss = mse_loss(tape, graph.prediction, tape.leaf(y, false));
      const double value = tape.value(loss)[0];
      if (!std::isfinite(value)) {
        throw DivergenceError("training diverged in epoch " + std::to_string(epoch) +
                                  " (last finite loss " + format_number(last_finite) + ")",
                              static_cast<int>(epoch), last_finite);
      }
      last_finite = value;
      tape.backward(loss);
      std::vector<std::vector<double>> grads;
      grads.reserve(graph.params.size());
      for (std::size_t i = 0; i < graph.params.size(); ++i) {
        const auto g = tape.grad(graph.params[i]);
        grads.emplace_back(g.begin(), g.end());
        if (grads.back().empty()) grads.back().assign(tensors[i]->size(), 0.0);
      }
      if (clip_global_norm(grads, cfg.clip_norm)) ++clipped;
      opt.step(grads);
      loss_sum += value * static_cast<double>(idx.size());
    }
    EpochRecord rec;
    rec.epoch = epoch;
    rec.train_loss = loss_sum / static_cast<double>(order.size());
    rec.val_loss = has_val ? evaluate_loss(params, config, val_windows) : rec.train_loss;
    if (!std::isfinite(rec.val_loss)) {
      throw DivergenceError("validation loss diverged in epoch " + std::to_string(epoch) +
                                " (last finite loss " + format_number(last_finite) + ")",
                            static_cast<int>(epoch), last_finite);
    }
    rec.clipped_batches = clipped;
    rec.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (clipped > 0 && on_event) {
      on_event("epoch " + std::to_string(epoch) + ": gradient norm clipped to " +
               format_number(cfg.clip_norm) + " in " + std::to_string(clipped) + " batch(es)");
    }
    const double score = rec.val_loss;
    if (score < best) {
      best = score;
      result.log.best_epoch = epoch;
      result.params = params;
    }
    result.log.epochs.push_back(rec);
  }
  for (Tensor* t : tensors) t->clear_grad();
  result.params.visit(config, [](const std::string&, Tensor& t) { t.clear_grad(); });
  return result;
}

}  // namespace laborcast
