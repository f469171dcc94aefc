// SPDX-License-Identifier: Apache-2.0
#include "laborcast/lstnet.hpp"

#include <cmath>

#include "laborcast/error.hpp"
#include "laborcast/rng.hpp"

namespace laborcast {

std::size_t LSTNetConfig::conv_length() const noexcept {
  return conv_kernel <= window ? window - conv_kernel + 1 : 0;
}

std::vector<std::size_t> LSTNetConfig::active_skips() const {
  std::vector<std::size_t> out;
  const std::size_t L = conv_length();
  for (std::size_t p : skip_lengths)
    if (p >= 1 && p <= L) out.push_back(p);
  return out;
}

std::size_t LSTNetConfig::head_width() const {
  std::size_t w = rnn_hidden;
  for (std::size_t p : active_skips()) w += p * skip_hidden;
  return w;
}

void LSTNetConfig::validate() const {
  auto fail = [](const std::string& msg) { throw ContractError("invalid LSTNet config: " + msg); };
  if (window == 0) fail("window must be positive");
  if (features == 0) fail("features must be positive");
  if (conv_channels == 0) fail("conv_channels must be positive");
  if (conv_kernel == 0 || conv_kernel > window)
    fail("conv kernel " + std::to_string(conv_kernel) + " must be in [1, window=" +
         std::to_string(window) + "]");
  if (rnn_hidden == 0) fail("rnn_hidden must be positive");
  if (highway_window == 0 || highway_window > window)
    fail("highway_window " + std::to_string(highway_window) + " must be in [1, window=" +
         std::to_string(window) + "]");
  if (horizon == 0) fail("horizon must be >= 1");
  if (target_index >= features)
    fail("target_index " + std::to_string(target_index) + " must be < features=" +
         std::to_string(features));
  for (std::size_t p : skip_lengths)
    if (p == 0) fail("skip lengths must be >= 1");
  if (!active_skips().empty() && skip_hidden == 0) fail("skip_hidden must be positive");
}

namespace {

GruParams gru_shapes(std::size_t in, std::size_t hidden) {
  GruParams g;
  for (Tensor* w : {&g.w_z, &g.w_r, &g.w_h}) *w = Tensor({hidden, in});
  for (Tensor* u : {&g.u_z, &g.u_r, &g.u_h}) *u = Tensor({hidden, hidden});
  for (Tensor* b : {&g.b_z, &g.b_r, &g.b_h}) *b = Tensor({hidden});
  return g;
}

LSTNetParams zero_params(const LSTNetConfig& c) {
  LSTNetParams p;
  p.conv_weight = Tensor({c.conv_channels, c.conv_kernel, c.features});
  p.conv_bias = Tensor({c.conv_channels});
  p.gru = gru_shapes(c.conv_channels, c.rnn_hidden);
  for (std::size_t i = 0; i < c.active_skips().size(); ++i)
    p.skip.push_back(gru_shapes(c.conv_channels, c.skip_hidden));
  p.out_weight = Tensor({c.horizon, c.head_width()});
  p.out_bias = Tensor({c.horizon});
  p.ar_weight = Tensor({c.horizon, c.highway_window});
  p.ar_bias = Tensor({c.horizon});
  return p;
}

bool is_bias(const std::string& name) {
  return name.ends_with("bias") || name.ends_with(".b_z") || name.ends_with(".b_r") ||
         name.ends_with(".b_h");
}

}  // namespace

std::size_t LSTNetParams::tensor_count() const { return 15 + 9 * skip.size(); }

std::size_t LSTNetParams::parameter_count() const {
  std::size_t n = conv_weight.size() + conv_bias.size() + out_weight.size() + out_bias.size() +
                  ar_weight.size() + ar_bias.size();
  auto gru_count = [](const GruParams& g) {
    return g.w_z.size() + g.u_z.size() + g.b_z.size() + g.w_r.size() + g.u_r.size() + g.b_r.size() +
           g.w_h.size() + g.u_h.size() + g.b_h.size();
  };
  n += gru_count(gru);
  for (const auto& s : skip) n += gru_count(s);
  return n;
}

std::size_t parameter_count(const LSTNetConfig& config) {
  std::size_t n = 0;
  for (const auto& [name, shape] : expected_shapes(config)) n += shape_size(shape);
  return n;
}

std::vector<std::pair<std::string, Shape>> expected_shapes(const LSTNetConfig& config) {
  config.validate();
  std::vector<std::pair<std::string, Shape>> out;
  const LSTNetParams p = zero_params(config);
  p.visit(config, [&](const std::string& name, const Tensor& t) { out.emplace_back(name, t.shape()); });
  return out;
}

void audit_shapes(const LSTNetParams& params, const LSTNetConfig& config) {
  const auto expected = expected_shapes(config);
  if (params.skip.size() != config.active_skips().size()) {
    throw DimensionError("model has " + std::to_string(params.skip.size()) +
                         " skip branches, config implies " +
                         std::to_string(config.active_skips().size()));
  }
  std::size_t i = 0;
  params.visit(config, [&](const std::string& name, const Tensor& t) {
    const auto& [ename, eshape] = expected[i++];
    if (t.shape() != eshape) {
      throw DimensionError("parameter " + name + " has shape " + shape_to_string(t.shape()) +
                           ", config implies " + shape_to_string(eshape));
    }
  });
}

LSTNetParams init_params(const LSTNetConfig& config, std::uint64_t seed) {
  config.validate();
  LSTNetParams p = zero_params(config);
  Rng rng(seed);
  p.visit(config, [&](const std::string& name, Tensor& t) {
    t.set_requires_grad(true);
    if (is_bias(name)) return;
    const std::size_t fan_in = t.size() / t.dim(0);
    const double bound = 1.0 / std::sqrt(static_cast<double>(fan_in));
    for (double& v : t.values()) v = rng.uniform(-bound, bound);
  });
  return p;
}

std::vector<std::vector<std::size_t>> skip_schedule(std::size_t conv_length, std::size_t p) {
  if (p == 0) throw ContractError("skip length must be >= 1");
  const std::size_t per_phase = conv_length / p;
  const std::size_t start = conv_length - per_phase * p;
  std::vector<std::vector<std::size_t>> phases(p);
  for (std::size_t j = 0; j < p; ++j)
    for (std::size_t i = 0; i < per_phase; ++i) phases[j].push_back(start + j + i * p);
  return phases;
}

GruVars bind_gru(Tape& tape, const GruParams& p, bool track) {
  return GruVars{tape.leaf(p.w_z, track), tape.leaf(p.u_z, track), tape.leaf(p.b_z, track),
                 tape.leaf(p.w_r, track), tape.leaf(p.u_r, track), tape.leaf(p.b_r, track),
                 tape.leaf(p.w_h, track), tape.leaf(p.u_h, track), tape.leaf(p.b_h, track)};
}

Var gru_step(Tape& tape, Var x, Var h_prev, const GruVars& g) {
  const Var z = tape.sigmoid(tape.add(tape.linear(x, g.w_z, g.b_z), tape.linear(h_prev, g.u_z)));
  const Var r = tape.sigmoid(tape.add(tape.linear(x, g.w_r, g.b_r), tape.linear(h_prev, g.u_r)));
  const Var c = tape.tanh(
      tape.add(tape.linear(x, g.w_h, g.b_h), tape.linear(tape.mul(r, h_prev), g.u_h)));
  // (1 - z) * h + z * c  ==  h + z * (c - h)
  return tape.add(h_prev, tape.mul(z, tape.sub(c, h_prev)));
}

Tensor gru_step(const Tensor& x, const Tensor& h_prev, const GruParams& gru) {
  Tape tape;
  const bool batched = x.rank() == 2;
  Tensor xb = batched ? x : Tensor({1, x.size()}, std::vector<double>(x.values().begin(), x.values().end()));
  Tensor hb = h_prev.rank() == 2
                  ? h_prev
                  : Tensor({1, h_prev.size()},
                           std::vector<double>(h_prev.values().begin(), h_prev.values().end()));
  if (xb.dim(1) != gru.w_z.dim(1) || hb.dim(1) != gru.hidden() || xb.dim(0) != hb.dim(0)) {
    throw DimensionError("gru_step: input " + shape_to_string(x.shape()) + " / state " +
                         shape_to_string(h_prev.shape()) + " do not match weights " +
                         shape_to_string(gru.w_z.shape()));
  }
  const GruVars vars = bind_gru(tape, gru, false);
  const Var h = gru_step(tape, tape.leaf(xb, false), tape.leaf(hb, false), vars);
  Tensor out = tape.value(h);
  if (!batched) out = Tensor({out.size()}, std::vector<double>(out.values().begin(), out.values().end()));
  return out;
}

ForwardGraph forward(Tape& tape, const Tensor& x, const LSTNetParams& params,
                     const LSTNetConfig& config, bool track) {
  if (x.rank() != 3 || x.dim(1) != config.window || x.dim(2) != config.features) {
    throw DimensionError("forward: input " + shape_to_string(x.shape()) + " does not match [N x " +
                         std::to_string(config.window) + " x " + std::to_string(config.features) +
                         "]");
  }
  audit_shapes(params, config);
  const std::size_t N = x.dim(0);
  ForwardGraph g;

  const Var input = tape.constant(x);
  const Var conv_w = tape.leaf(params.conv_weight, track);
  const Var conv_b = tape.leaf(params.conv_bias, track);
  g.params = {conv_w, conv_b};
  auto push_gru = [&](const GruVars& v) {
    for (Var p : {v.w_z, v.u_z, v.b_z, v.w_r, v.u_r, v.b_r, v.w_h, v.u_h, v.b_h}) g.params.push_back(p);
  };
  const GruVars gru = bind_gru(tape, params.gru, track);
  push_gru(gru);
  std::vector<GruVars> skips;
  for (const auto& s : params.skip) {
    skips.push_back(bind_gru(tape, s, track));
    push_gru(skips.back());
  }
  const Var out_w = tape.leaf(params.out_weight, track);
  const Var out_b = tape.leaf(params.out_bias, track);
  const Var ar_w = tape.leaf(params.ar_weight, track);
  const Var ar_b = tape.leaf(params.ar_bias, track);
  for (Var p : {out_w, out_b, ar_w, ar_b}) g.params.push_back(p);

  const Var conv = tape.relu(tape.conv2d(input, conv_w, conv_b));  // [N x C x L]
  const std::size_t L = config.conv_length();

  const Tensor zero_main({N, config.rnn_hidden});
  Var h = tape.constant(zero_main);
  for (std::size_t t = 0; t < L; ++t) h = gru_step(tape, tape.slice_time(conv, t), h, gru);

  std::vector<Var> head{h};
  const auto active = config.active_skips();
  for (std::size_t s = 0; s < active.size(); ++s) {
    for (const auto& phase : skip_schedule(L, active[s])) {
      Var hs = tape.constant(Tensor({N, config.skip_hidden}));
      for (std::size_t t : phase) hs = gru_step(tape, tape.slice_time(conv, t), hs, skips[s]);
      head.push_back(hs);
    }
  }
  const Var features = head.size() == 1 ? head[0] : tape.concat_cols(head);
  g.neural = tape.linear(features, out_w, out_b);

  std::vector<std::size_t> cols;
  const std::size_t T = config.window, F = config.features;
  for (std::size_t j = T - config.highway_window; j < T; ++j) cols.push_back(j * F + config.target_index);
  g.autoregressive = tape.linear(tape.gather_cols(input, std::move(cols)), ar_w, ar_b);
  g.prediction = tape.add(g.neural, g.autoregressive);
  return g;
}

Tensor predict(const Tensor& x, const LSTNetParams& params, const LSTNetConfig& config) {
  Tape tape;
  if (x.rank() == 2) {
    const Tensor batched({1, x.dim(0), x.dim(1)}, std::vector<double>(x.values().begin(), x.values().end()));
    return tape.value(forward(tape, batched, params, config).prediction);
  }
  return tape.value(forward(tape, x, params, config).prediction);
}

}  // namespace laborcast
