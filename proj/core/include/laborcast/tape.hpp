// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "laborcast/tensor.hpp"

namespace laborcast {

// Handle to a value recorded on a Tape. Only meaningful for the tape that
// produced it.
struct Var {
  static constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();
  std::size_t id = kNone;
  bool valid() const noexcept { return id != kNone; }
};

// Reverse-mode computation tape.
//
// Every primitive appends one entry whose operands were recorded earlier, so
// the entry order is a topological order of the graph. backward() walks the
// entries once in reverse and accumulates gradients additively, which is
// what makes a value used on several paths receive the sum of its
// contributions.
//
// A tape is single-threaded; leaves reference caller-owned tensors, which
// must outlive the tape.
class Tape {
 public:
  Tape() = default;
  Tape(const Tape&) = delete;
  Tape& operator=(const Tape&) = delete;
  Tape(Tape&&) = default;
  Tape& operator=(Tape&&) = default;

  // Leaf that borrows `t`. requires_grad follows t.requires_grad().
  Var leaf(const Tensor& t);
  // Leaf that borrows `t` with an explicit gradient flag.
  Var leaf(const Tensor& t, bool requires_grad);
  // Leaf that owns its value and never requires a gradient.
  Var constant(Tensor t);

  // [m x k] . [k x n] -> [m x n]
  Var matmul(Var a, Var b);
  // x [m x in], weight [out x in], optional bias [out] -> x . weight^T + bias
  Var linear(Var x, Var weight, Var bias = {});
  // input [N x T x F], kernels [C x k x F], bias [C] -> [N x C x (T-k+1)].
  // Valid cross-correlation along time; kernels span the full feature axis.
  Var conv2d(Var input, Var kernels, Var bias);

  // Equal shapes, or one side holding a single value (scalar broadcast).
  Var add(Var a, Var b);
  Var sub(Var a, Var b);
  Var mul(Var a, Var b);
  // scale * x + shift
  Var affine(Var x, double scale, double shift);
  Var relu(Var x);
  Var sigmoid(Var x);
  Var tanh(Var x);

  // x [N x C x L] -> [N x C], the frame at time t.
  Var slice_time(Var x, std::size_t t);
  // x [m x n] -> [m x count], columns [start, start + count).
  Var slice_cols(Var x, std::size_t start, std::size_t count);
  // Concatenates [m x n_i] blocks along columns.
  Var concat_cols(std::span<const Var> parts);
  // Views x as [dim0 x rest] and gathers the listed flat column indices.
  Var gather_cols(Var x, std::vector<std::size_t> columns);
  Var reshape(Var x, Shape shape);
  Var sum(Var x);
  Var mean(Var x);

  void backward(Var loss);

  const Tensor& value(Var v) const;
  // Gradient after backward(); empty span when no gradient reached v.
  std::span<const double> grad(Var v) const;
  bool requires_grad(Var v) const;

  std::size_t size() const noexcept { return nodes_.size(); }
  // Entries processed by the last backward() call.
  std::size_t last_backward_visits() const noexcept { return backward_visits_; }
  void clear();

 private:
  enum class Op : std::uint8_t {
    kLeaf,
    kMatMul,
    kLinear,
    kConv2d,
    kAdd,
    kSub,
    kMul,
    kAffine,
    kRelu,
    kSigmoid,
    kTanh,
    kSliceTime,
    kSliceCols,
    kConcatCols,
    kGatherCols,
    kReshape,
    kSum,
    kMean,
  };

  struct Node {
    Op op = Op::kLeaf;
    Tensor owned;
    const Tensor* borrowed = nullptr;
    std::vector<double> grad;
    bool needs_grad = false;
    std::size_t in[3] = {Var::kNone, Var::kNone, Var::kNone};
    std::vector<std::size_t> index;
    double scale = 0.0;
    std::size_t p0 = 0;
    std::size_t p1 = 0;

    const Tensor& value() const { return borrowed ? *borrowed : owned; }
  };

  Node& node(Var v);
  const Node& node(Var v) const;
  Var push(Node n);
  std::vector<double>& grad_buffer(std::size_t id);
  Var binary(Op op, Var a, Var b, const char* name);
  void backward_node(std::size_t id);

  std::vector<Node> nodes_;
  std::size_t backward_visits_ = 0;
};

}  // namespace laborcast
