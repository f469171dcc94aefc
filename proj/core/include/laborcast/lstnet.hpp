// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "laborcast/tape.hpp"
#include "laborcast/tensor.hpp"

namespace laborcast {

// Architecture of one LSTNet model: conv -> GRU, recurrent-skip GRUs over the
// conv output, a dense head over the concatenated final states, and a linear
// autoregressive highway over the tail of the target feature.
struct LSTNetConfig {
  std::size_t window = 28;  // input steps T
  std::size_t features = 7;  // F
  std::size_t conv_channels = 32;
  std::size_t conv_kernel = 6;
  std::size_t rnn_hidden = 100;
  std::vector<std::size_t> skip_lengths{24};
  std::size_t skip_hidden = 5;
  std::size_t highway_window = 24;
  std::size_t horizon = 7;
  std::size_t target_index = 0;

  // Time steps left after the valid convolution, T - k + 1.
  std::size_t conv_length() const noexcept;
  // Skip lengths that give every phase at least one frame. Longer skips are
  // accepted by validate() but carry no parameters.
  std::vector<std::size_t> active_skips() const;
  // Width of the dense head input.
  std::size_t head_width() const;
  // Throws ContractError describing the first violated constraint.
  void validate() const;

  bool operator==(const LSTNetConfig&) const = default;
};

struct GruParams {
  Tensor w_z, u_z, b_z;  // update gate
  Tensor w_r, u_r, b_r;  // reset gate
  Tensor w_h, u_h, b_h;  // candidate

  std::size_t hidden() const { return b_z.size(); }
};

struct LSTNetParams {
  Tensor conv_weight;  // [C x k x F]
  Tensor conv_bias;  // [C]
  GruParams gru;
  std::vector<GruParams> skip;  // one per active skip length, in config order
  Tensor out_weight;  // [h x head_width]
  Tensor out_bias;  // [h]
  Tensor ar_weight;  // [h x hw]
  Tensor ar_bias;  // [h]

  // Calls fn(name, tensor) for every tensor in a fixed order. The order is the
  // checkpoint order and the order of ForwardGraph::params.
  template <typename Fn>
  void visit(const LSTNetConfig& config, Fn&& fn);
  template <typename Fn>
  void visit(const LSTNetConfig& config, Fn&& fn) const;

  std::size_t tensor_count() const;
  std::size_t parameter_count() const;
};

// Number of scalar parameters implied by a configuration.
std::size_t parameter_count(const LSTNetConfig& config);

// Expected shape of every parameter tensor, in visit order.
std::vector<std::pair<std::string, Shape>> expected_shapes(const LSTNetConfig& config);

// Throws DimensionError naming the first tensor whose shape disagrees with
// the configuration.
void audit_shapes(const LSTNetParams& params, const LSTNetConfig& config);

// Weights uniform in +-1/sqrt(fan_in), biases zero, deterministic in seed.
LSTNetParams init_params(const LSTNetConfig& config, std::uint64_t seed);

// Frame indices each phase of a skip-p GRU consumes from a conv output of
// length `conv_length`: the last floor(L/p)*p frames, phase j taking every
// p-th frame starting at its offset.
std::vector<std::vector<std::size_t>> skip_schedule(std::size_t conv_length, std::size_t p);

struct GruVars {
  Var w_z, u_z, b_z, w_r, u_r, b_r, w_h, u_h, b_h;
};

GruVars bind_gru(Tape& tape, const GruParams& p, bool track);

// One GRU step: z = sigmoid(W_z x + U_z h + b_z), r = sigmoid(W_r x + U_r h + b_r),
// c = tanh(W_h x + U_h (r * h) + b_h), h' = (1 - z) * h + z * c.
// x is [N x in], h_prev is [N x hidden].
Var gru_step(Tape& tape, Var x, Var h_prev, const GruVars& gru);
Tensor gru_step(const Tensor& x, const Tensor& h_prev, const GruParams& gru);

struct ForwardGraph {
  Var prediction;  // [N x h]
  Var neural;  // dense head output
  Var autoregressive;  // highway output
  std::vector<Var> params;  // visit order
};

// x is [N x T x F]. Parameters are bound with gradient tracking when `track`.
ForwardGraph forward(Tape& tape, const Tensor& x, const LSTNetParams& params,
                     const LSTNetConfig& config, bool track = false);

// Convenience inference: x is [N x T x F] or [T x F]; returns [N x h].
Tensor predict(const Tensor& x, const LSTNetParams& params, const LSTNetConfig& config);

// ---------------------------------------------------------------------------

namespace detail {
template <typename Params, typename Fn>
void visit_gru(const std::string& prefix, Params& g, Fn& fn) {
  fn(prefix + ".w_z", g.w_z);
  fn(prefix + ".u_z", g.u_z);
  fn(prefix + ".b_z", g.b_z);
  fn(prefix + ".w_r", g.w_r);
  fn(prefix + ".u_r", g.u_r);
  fn(prefix + ".b_r", g.b_r);
  fn(prefix + ".w_h", g.w_h);
  fn(prefix + ".u_h", g.u_h);
  fn(prefix + ".b_h", g.b_h);
}

template <typename Params, typename Fn>
void visit_params(const LSTNetConfig& config, Params& p, Fn& fn) {
  fn(std::string("conv.weight"), p.conv_weight);
  fn(std::string("conv.bias"), p.conv_bias);
  visit_gru(std::string("gru"), p.gru, fn);
  const auto skips = config.active_skips();
  for (std::size_t i = 0; i < p.skip.size(); ++i) {
    const std::size_t len = i < skips.size() ? skips[i] : i;
    visit_gru("skip" + std::to_string(len), p.skip[i], fn);
  }
  fn(std::string("out.weight"), p.out_weight);
  fn(std::string("out.bias"), p.out_bias);
  fn(std::string("ar.weight"), p.ar_weight);
  fn(std::string("ar.bias"), p.ar_bias);
}
}  // namespace detail

template <typename Fn>
void LSTNetParams::visit(const LSTNetConfig& config, Fn&& fn) {
  detail::visit_params(config, *this, fn);
}

template <typename Fn>
void LSTNetParams::visit(const LSTNetConfig& config, Fn&& fn) const {
  detail::visit_params(config, *this, fn);
}

}  // namespace laborcast
