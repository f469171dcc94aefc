// SPDX-License-Identifier: Apache-2.0
#include "laborcast/tape.hpp"

#include <Eigen/Core>
#include <algorithm>
#include <cmath>
#include <string>

#include "laborcast/error.hpp"

namespace laborcast {

namespace {

using RowMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using ConstMap = Eigen::Map<const RowMat>;
using MutMap = Eigen::Map<RowMat>;
using StridedMap = Eigen::Map<const RowMat, 0, Eigen::OuterStride<>>;

double sigmoid_value(double x) {
  // Split on sign so exp never overflows.
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

void require_rank(const Tensor& t, std::size_t rank, const char* op, const char* role) {
  if (t.rank() != rank) {
    throw DimensionError(std::string(op) + ": " + role + " must have rank " + std::to_string(rank) +
                         ", got " + shape_to_string(t.shape()));
  }
}

}  // namespace

Tape::Node& Tape::node(Var v) {
  if (v.id >= nodes_.size()) throw ContractError("variable does not belong to this tape");
  return nodes_[v.id];
}

const Tape::Node& Tape::node(Var v) const {
  if (v.id >= nodes_.size()) throw ContractError("variable does not belong to this tape");
  return nodes_[v.id];
}

Var Tape::push(Node n) {
  nodes_.push_back(std::move(n));
  return Var{nodes_.size() - 1};
}

std::vector<double>& Tape::grad_buffer(std::size_t id) {
  Node& n = nodes_[id];
  if (n.grad.empty()) n.grad.assign(n.value().size(), 0.0);
  return n.grad;
}

Var Tape::leaf(const Tensor& t) { return leaf(t, t.requires_grad()); }

Var Tape::leaf(const Tensor& t, bool requires_grad) {
  Node n;
  n.borrowed = &t;
  n.needs_grad = requires_grad;
  return push(std::move(n));
}

Var Tape::constant(Tensor t) {
  Node n;
  n.owned = std::move(t);
  return push(std::move(n));
}

const Tensor& Tape::value(Var v) const { return node(v).value(); }

std::span<const double> Tape::grad(Var v) const { return node(v).grad; }

bool Tape::requires_grad(Var v) const { return node(v).needs_grad; }

void Tape::clear() {
  nodes_.clear();
  backward_visits_ = 0;
}

Var Tape::matmul(Var a, Var b) {
  const Tensor& A = value(a);
  const Tensor& B = value(b);
  require_rank(A, 2, "matmul", "left operand");
  require_rank(B, 2, "matmul", "right operand");
  if (A.dim(1) != B.dim(0)) {
    throw DimensionError("matmul: inner dimensions differ for " + shape_to_string(A.shape()) +
                         " and " + shape_to_string(B.shape()));
  }
  const std::size_t m = A.dim(0), k = A.dim(1), n = B.dim(1);
  Tensor out({m, n});
  MutMap(out.data(), m, n).noalias() = ConstMap(A.data(), m, k) * ConstMap(B.data(), k, n);
  Node nd;
  nd.op = Op::kMatMul;
  nd.owned = std::move(out);
  nd.in[0] = a.id;
  nd.in[1] = b.id;
  nd.needs_grad = node(a).needs_grad || node(b).needs_grad;
  return push(std::move(nd));
}

Var Tape::linear(Var x, Var weight, Var bias) {
  const Tensor& X = value(x);
  const Tensor& W = value(weight);
  require_rank(X, 2, "linear", "input");
  require_rank(W, 2, "linear", "weight");
  if (X.dim(1) != W.dim(1)) {
    throw DimensionError("linear: input " + shape_to_string(X.shape()) + " does not match weight " +
                         shape_to_string(W.shape()));
  }
  const std::size_t m = X.dim(0), in = X.dim(1), out_dim = W.dim(0);
  Tensor out({m, out_dim});
  MutMap Y(out.data(), m, out_dim);
  Y.noalias() = ConstMap(X.data(), m, in) * ConstMap(W.data(), out_dim, in).transpose();
  bool needs = node(x).needs_grad || node(weight).needs_grad;
  if (bias.valid()) {
    const Tensor& b = value(bias);
    if (b.size() != out_dim) {
      throw DimensionError("linear: bias " + shape_to_string(b.shape()) + " does not match weight " +
                           shape_to_string(W.shape()));
    }
    Y.rowwise() += Eigen::Map<const Eigen::RowVectorXd>(b.data(), out_dim);
    needs = needs || node(bias).needs_grad;
  }
  Node nd;
  nd.op = Op::kLinear;
  nd.owned = std::move(out);
  nd.in[0] = x.id;
  nd.in[1] = weight.id;
  nd.in[2] = bias.id;
  nd.needs_grad = needs;
  return push(std::move(nd));
}

Var Tape::conv2d(Var input, Var kernels, Var bias) {
  const Tensor& X = value(input);
  const Tensor& K = value(kernels);
  const Tensor& B = value(bias);
  require_rank(X, 3, "conv2d", "input");
  require_rank(K, 3, "conv2d", "kernels");
  const std::size_t N = X.dim(0), T = X.dim(1), F = X.dim(2);
  const std::size_t C = K.dim(0), k = K.dim(1);
  if (K.dim(2) != F) {
    throw DimensionError("conv2d: kernel " + shape_to_string(K.shape()) +
                         " must span the feature axis of input " + shape_to_string(X.shape()));
  }
  if (B.size() != C) {
    throw DimensionError("conv2d: bias " + shape_to_string(B.shape()) + " does not match " +
                         std::to_string(C) + " channels");
  }
  if (k == 0 || k > T) {
    throw WindowError("conv2d: kernel length " + std::to_string(k) + " exceeds window length " +
                      std::to_string(T));
  }
  const std::size_t L = T - k + 1;
  const std::size_t kf = k * F;
  Tensor out({N, C, L});
  ConstMap Km(K.data(), C, kf);
  Eigen::Map<const Eigen::VectorXd> bm(B.data(), C);
  for (std::size_t n = 0; n < N; ++n) {
    // Row t of the patch matrix is the k x F block starting at time t, which is
    // contiguous in the row-major input.
    StridedMap P(X.data() + n * T * F, L, kf, Eigen::OuterStride<>(F));
    MutMap Y(out.data() + n * C * L, C, L);
    Y.noalias() = Km * P.transpose();
    Y.colwise() += bm;
  }
  Node nd;
  nd.op = Op::kConv2d;
  nd.owned = std::move(out);
  nd.in[0] = input.id;
  nd.in[1] = kernels.id;
  nd.in[2] = bias.id;
  nd.needs_grad = node(input).needs_grad || node(kernels).needs_grad || node(bias).needs_grad;
  return push(std::move(nd));
}

Var Tape::binary(Op op, Var a, Var b, const char* name) {
  const Tensor& A = value(a);
  const Tensor& B = value(b);
  const bool same = A.shape() == B.shape();
  if (!same && A.size() != 1 && B.size() != 1) {
    throw DimensionError(std::string(name) + ": incompatible shapes " + shape_to_string(A.shape()) +
                         " and " + shape_to_string(B.shape()));
  }
  const bool a_scalar = !same && A.size() == 1;
  const Tensor& big = a_scalar ? B : A;
  Tensor out(big.shape());
  const std::size_t n = out.size();
  const double* pa = A.data();
  const double* pb = B.data();
  const std::size_t sa = (!same && A.size() == 1) ? 0 : 1;
  const std::size_t sb = (!same && B.size() == 1) ? 0 : 1;
  double* po = out.data();
  switch (op) {
    case Op::kAdd:
      for (std::size_t i = 0; i < n; ++i) po[i] = pa[i * sa] + pb[i * sb];
      break;
    case Op::kSub:
      for (std::size_t i = 0; i < n; ++i) po[i] = pa[i * sa] - pb[i * sb];
      break;
    case Op::kMul:
      for (std::size_t i = 0; i < n; ++i) po[i] = pa[i * sa] * pb[i * sb];
      break;
    default:
      throw ContractError("not a binary op");
  }
  Node nd;
  nd.op = op;
  nd.owned = std::move(out);
  nd.in[0] = a.id;
  nd.in[1] = b.id;
  nd.p0 = sa;
  nd.p1 = sb;
  nd.needs_grad = node(a).needs_grad || node(b).needs_grad;
  return push(std::move(nd));
}

Var Tape::add(Var a, Var b) { return binary(Op::kAdd, a, b, "add"); }
Var Tape::sub(Var a, Var b) { return binary(Op::kSub, a, b, "sub"); }
Var Tape::mul(Var a, Var b) { return binary(Op::kMul, a, b, "mul"); }

Var Tape::affine(Var x, double scale, double shift) {
  const Tensor& X = value(x);
  Tensor out(X.shape());
  for (std::size_t i = 0; i < X.size(); ++i) out[i] = scale * X[i] + shift;
  Node nd;
  nd.op = Op::kAffine;
  nd.owned = std::move(out);
  nd.in[0] = x.id;
  nd.scale = scale;
  nd.needs_grad = node(x).needs_grad;
  return push(std::move(nd));
}

Var Tape::relu(Var x) {
  const Tensor& X = value(x);
  Tensor out(X.shape());
  for (std::size_t i = 0; i < X.size(); ++i) out[i] = X[i] > 0.0 ? X[i] : 0.0;
  Node nd;
  nd.op = Op::kRelu;
  nd.owned = std::move(out);
  nd.in[0] = x.id;
  nd.needs_grad = node(x).needs_grad;
  return push(std::move(nd));
}

Var Tape::sigmoid(Var x) {
  const Tensor& X = value(x);
  Tensor out(X.shape());
  for (std::size_t i = 0; i < X.size(); ++i) out[i] = sigmoid_value(X[i]);
  Node nd;
  nd.op = Op::kSigmoid;
  nd.owned = std::move(out);
  nd.in[0] = x.id;
  nd.needs_grad = node(x).needs_grad;
  return push(std::move(nd));
}

Var Tape::tanh(Var x) {
  const Tensor& X = value(x);
  Tensor out(X.shape());
  for (std::size_t i = 0; i < X.size(); ++i) out[i] = std::tanh(X[i]);
  Node nd;
  nd.op = Op::kTanh;
  nd.owned = std::move(out);
  nd.in[0] = x.id;
  nd.needs_grad = node(x).needs_grad;
  return push(std::move(nd));
}

Var Tape::slice_time(Var x, std::size_t t) {
  const Tensor& X = value(x);
  require_rank(X, 3, "slice_time", "input");
  const std::size_t N = X.dim(0), C = X.dim(1), L = X.dim(2);
  if (t >= L) {
    throw DimensionError("slice_time: frame " + std::to_string(t) + " outside " +
                         shape_to_string(X.shape()));
  }
  Tensor out({N, C});
  for (std::size_t n = 0; n < N; ++n)
    for (std::size_t c = 0; c < C; ++c) out[n * C + c] = X[(n * C + c) * L + t];
  Node nd;
  nd.op = Op::kSliceTime;
  nd.owned = std::move(out);
  nd.in[0] = x.id;
  nd.p0 = t;
  nd.needs_grad = node(x).needs_grad;
  return push(std::move(nd));
}

Var Tape::slice_cols(Var x, std::size_t start, std::size_t count) {
  const Tensor& X = value(x);
  require_rank(X, 2, "slice_cols", "input");
  const std::size_t m = X.dim(0), n = X.dim(1);
  if (start + count > n) {
    throw DimensionError("slice_cols: columns [" + std::to_string(start) + ", " +
                         std::to_string(start + count) + ") outside " + shape_to_string(X.shape()));
  }
  Tensor out({m, count});
  for (std::size_t r = 0; r < m; ++r)
    std::copy_n(X.data() + r * n + start, count, out.data() + r * count);
  Node nd;
  nd.op = Op::kSliceCols;
  nd.owned = std::move(out);
  nd.in[0] = x.id;
  nd.p0 = start;
  nd.p1 = count;
  nd.needs_grad = node(x).needs_grad;
  return push(std::move(nd));
}

Var Tape::concat_cols(std::span<const Var> parts) {
  if (parts.empty()) throw ContractError("concat_cols: nothing to concatenate");
  const std::size_t m = value(parts[0]).rank() == 2 ? value(parts[0]).dim(0) : 0;
  std::size_t total = 0;
  Node nd;
  nd.op = Op::kConcatCols;
  for (Var p : parts) {
    const Tensor& P = value(p);
    require_rank(P, 2, "concat_cols", "part");
    if (P.dim(0) != m) {
      throw DimensionError("concat_cols: row count " + std::to_string(P.dim(0)) + " differs from " +
                           std::to_string(m));
    }
    total += P.dim(1);
    nd.index.push_back(p.id);
    nd.needs_grad = nd.needs_grad || node(p).needs_grad;
  }
  Tensor out({m, total});
  std::size_t offset = 0;
  for (Var p : parts) {
    const Tensor& P = value(p);
    const std::size_t w = P.dim(1);
    for (std::size_t r = 0; r < m; ++r)
      std::copy_n(P.data() + r * w, w, out.data() + r * total + offset);
    offset += w;
  }
  nd.owned = std::move(out);
  return push(std::move(nd));
}

Var Tape::gather_cols(Var x, std::vector<std::size_t> columns) {
  const Tensor& X = value(x);
  if (X.rank() < 2) throw DimensionError("gather_cols: input needs rank >= 2");
  const std::size_t m = X.dim(0);
  const std::size_t width = X.size() / std::max<std::size_t>(m, 1);
  for (std::size_t c : columns) {
    if (c >= width) {
      throw DimensionError("gather_cols: column " + std::to_string(c) + " outside " +
                           shape_to_string(X.shape()));
    }
  }
  Tensor out({m, columns.size()});
  for (std::size_t r = 0; r < m; ++r)
    for (std::size_t j = 0; j < columns.size(); ++j)
      out[r * columns.size() + j] = X[r * width + columns[j]];
  Node nd;
  nd.op = Op::kGatherCols;
  nd.owned = std::move(out);
  nd.in[0] = x.id;
  nd.index = std::move(columns);
  nd.p0 = width;
  nd.needs_grad = node(x).needs_grad;
  return push(std::move(nd));
}

Var Tape::reshape(Var x, Shape shape) {
  const Tensor& X = value(x);
  if (shape_size(shape) != X.size()) {
    throw DimensionError("reshape: " + shape_to_string(X.shape()) + " cannot become " +
                         shape_to_string(shape));
  }
  Tensor out(std::move(shape), std::vector<double>(X.values().begin(), X.values().end()));
  Node nd;
  nd.op = Op::kReshape;
  nd.owned = std::move(out);
  nd.in[0] = x.id;
  nd.needs_grad = node(x).needs_grad;
  return push(std::move(nd));
}

Var Tape::sum(Var x) {
  const Tensor& X = value(x);
  double s = 0.0;
  for (double v : X.values()) s += v;
  Node nd;
  nd.op = Op::kSum;
  nd.owned = Tensor::scalar(s);
  nd.in[0] = x.id;
  nd.needs_grad = node(x).needs_grad;
  return push(std::move(nd));
}

Var Tape::mean(Var x) {
  const Tensor& X = value(x);
  if (X.size() == 0) throw ContractError("mean of an empty tensor");
  double s = 0.0;
  for (double v : X.values()) s += v;
  Node nd;
  nd.op = Op::kMean;
  nd.owned = Tensor::scalar(s / static_cast<double>(X.size()));
  nd.in[0] = x.id;
  nd.needs_grad = node(x).needs_grad;
  return push(std::move(nd));
}

void Tape::backward(Var loss) {
  const Node& root = node(loss);
  if (root.value().size() != 1) {
    throw ContractError("backward: loss must be a scalar, got " +
                        shape_to_string(root.value().shape()));
  }
  for (Node& n : nodes_) n.grad.clear();
  grad_buffer(loss.id)[0] = 1.0;
  backward_visits_ = 0;
  for (std::size_t i = loss.id + 1; i-- > 0;) {
    ++backward_visits_;
    Node& n = nodes_[i];
    if (!n.needs_grad || n.grad.empty() || n.op == Op::kLeaf) continue;
    backward_node(i);
  }
}

void Tape::backward_node(std::size_t id) {
  // Gradient buffers of operands may be allocated below, which never
  // reallocates nodes_, so references into nodes_ stay valid.
  Node& n = nodes_[id];
  const std::vector<double>& g = n.grad;
  auto wants = [&](std::size_t in) { return in != Var::kNone && nodes_[in].needs_grad; };

  switch (n.op) {
    case Op::kLeaf:
      break;
    case Op::kMatMul: {
      const Tensor& A = nodes_[n.in[0]].value();
      const Tensor& B = nodes_[n.in[1]].value();
      const std::size_t m = A.dim(0), k = A.dim(1), c = B.dim(1);
      ConstMap G(g.data(), m, c);
      if (wants(n.in[0]))
        MutMap(grad_buffer(n.in[0]).data(), m, k).noalias() += G * ConstMap(B.data(), k, c).transpose();
      if (wants(n.in[1]))
        MutMap(grad_buffer(n.in[1]).data(), k, c).noalias() += ConstMap(A.data(), m, k).transpose() * G;
      break;
    }
    case Op::kLinear: {
      const Tensor& X = nodes_[n.in[0]].value();
      const Tensor& W = nodes_[n.in[1]].value();
      const std::size_t m = X.dim(0), in = X.dim(1), out = W.dim(0);
      ConstMap G(g.data(), m, out);
      if (wants(n.in[0]))
        MutMap(grad_buffer(n.in[0]).data(), m, in).noalias() += G * ConstMap(W.data(), out, in);
      if (wants(n.in[1]))
        MutMap(grad_buffer(n.in[1]).data(), out, in).noalias() += G.transpose() * ConstMap(X.data(), m, in);
      if (wants(n.in[2]))
        Eigen::Map<Eigen::RowVectorXd>(grad_buffer(n.in[2]).data(), out) += G.colwise().sum();
      break;
    }
    case Op::kConv2d: {
      const Tensor& X = nodes_[n.in[0]].value();
      const Tensor& K = nodes_[n.in[1]].value();
      const std::size_t N = X.dim(0), T = X.dim(1), F = X.dim(2);
      const std::size_t C = K.dim(0), k = K.dim(1);
      const std::size_t L = T - k + 1, kf = k * F;
      ConstMap Km(K.data(), C, kf);
      const bool gx = wants(n.in[0]), gk = wants(n.in[1]), gb = wants(n.in[2]);
      RowMat dP;
      for (std::size_t s = 0; s < N; ++s) {
        ConstMap G(g.data() + s * C * L, C, L);
        StridedMap P(X.data() + s * T * F, L, kf, Eigen::OuterStride<>(F));
        if (gk) MutMap(grad_buffer(n.in[1]).data(), C, kf).noalias() += G * P;
        if (gb) Eigen::Map<Eigen::VectorXd>(grad_buffer(n.in[2]).data(), C) += G.rowwise().sum();
        if (gx) {
          dP.noalias() = G.transpose() * Km;
          double* dx = grad_buffer(n.in[0]).data() + s * T * F;
          for (std::size_t t = 0; t < L; ++t)
            for (std::size_t j = 0; j < kf; ++j) dx[t * F + j] += dP(static_cast<Eigen::Index>(t),
                                                                        static_cast<Eigen::Index>(j));
        }
      }
      break;
    }
    case Op::kAdd:
    case Op::kSub:
    case Op::kMul: {
      const std::size_t sa = n.p0, sb = n.p1;
      const double* pa = nodes_[n.in[0]].value().data();
      const double* pb = nodes_[n.in[1]].value().data();
      const std::size_t cnt = g.size();
      if (wants(n.in[0])) {
        double* da = grad_buffer(n.in[0]).data();
        for (std::size_t i = 0; i < cnt; ++i) {
          const double d = n.op == Op::kMul ? g[i] * pb[i * sb] : g[i];
          da[i * sa] += d;
        }
      }
      if (wants(n.in[1])) {
        double* db = grad_buffer(n.in[1]).data();
        for (std::size_t i = 0; i < cnt; ++i) {
          double d = g[i];
          if (n.op == Op::kSub) d = -d;
          if (n.op == Op::kMul) d = g[i] * pa[i * sa];
          db[i * sb] += d;
        }
      }
      break;
    }
    case Op::kAffine: {
      if (!wants(n.in[0])) break;
      double* dx = grad_buffer(n.in[0]).data();
      for (std::size_t i = 0; i < g.size(); ++i) dx[i] += n.scale * g[i];
      break;
    }
    case Op::kRelu: {
      if (!wants(n.in[0])) break;
      const double* x = nodes_[n.in[0]].value().data();
      double* dx = grad_buffer(n.in[0]).data();
      for (std::size_t i = 0; i < g.size(); ++i)
        if (x[i] > 0.0) dx[i] += g[i];
      break;
    }
    case Op::kSigmoid: {
      if (!wants(n.in[0])) break;
      const double* y = n.owned.data();
      double* dx = grad_buffer(n.in[0]).data();
      for (std::size_t i = 0; i < g.size(); ++i) dx[i] += g[i] * y[i] * (1.0 - y[i]);
      break;
    }
    case Op::kTanh: {
      if (!wants(n.in[0])) break;
      const double* y = n.owned.data();
      double* dx = grad_buffer(n.in[0]).data();
      for (std::size_t i = 0; i < g.size(); ++i) dx[i] += g[i] * (1.0 - y[i] * y[i]);
      break;
    }
    case Op::kSliceTime: {
      if (!wants(n.in[0])) break;
      const Tensor& X = nodes_[n.in[0]].value();
      const std::size_t N = X.dim(0), C = X.dim(1), L = X.dim(2);
      double* dx = grad_buffer(n.in[0]).data();
      for (std::size_t s = 0; s < N; ++s)
        for (std::size_t c = 0; c < C; ++c) dx[(s * C + c) * L + n.p0] += g[s * C + c];
      break;
    }
    case Op::kSliceCols: {
      if (!wants(n.in[0])) break;
      const Tensor& X = nodes_[n.in[0]].value();
      const std::size_t m = X.dim(0), w = X.dim(1);
      double* dx = grad_buffer(n.in[0]).data();
      for (std::size_t r = 0; r < m; ++r)
        for (std::size_t j = 0; j < n.p1; ++j) dx[r * w + n.p0 + j] += g[r * n.p1 + j];
      break;
    }
    case Op::kConcatCols: {
      const std::size_t m = n.owned.dim(0), total = n.owned.dim(1);
      std::size_t offset = 0;
      for (std::size_t part : n.index) {
        const std::size_t w = nodes_[part].value().dim(1);
        if (nodes_[part].needs_grad) {
          double* dp = grad_buffer(part).data();
          for (std::size_t r = 0; r < m; ++r)
            for (std::size_t j = 0; j < w; ++j) dp[r * w + j] += g[r * total + offset + j];
        }
        offset += w;
      }
      break;
    }
    case Op::kGatherCols: {
      if (!wants(n.in[0])) break;
      const std::size_t m = n.owned.dim(0), cols = n.index.size(), width = n.p0;
      double* dx = grad_buffer(n.in[0]).data();
      for (std::size_t r = 0; r < m; ++r)
        for (std::size_t j = 0; j < cols; ++j) dx[r * width + n.index[j]] += g[r * cols + j];
      break;
    }
    case Op::kReshape: {
      if (!wants(n.in[0])) break;
      double* dx = grad_buffer(n.in[0]).data();
      for (std::size_t i = 0; i < g.size(); ++i) dx[i] += g[i];
      break;
    }
    case Op::kSum:
    case Op::kMean: {
      if (!wants(n.in[0])) break;
      std::vector<double>& dx = grad_buffer(n.in[0]);
      const double d = n.op == Op::kSum ? g[0] : g[0] / static_cast<double>(dx.size());
      for (double& v : dx) v += d;
      break;
    }
  }
}

}  // namespace laborcast
