// SPDX-License-Identifier: Apache-2.0
#include "laborcast/checkpoint.hpp"

#include <bit>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <vector>

#include "laborcast/error.hpp"

namespace laborcast {

namespace {

constexpr char kMagic[4] = {'L', 'C', 'K', 'P'};

// Little-endian byte sink that also folds every byte into an FNV-1a hash.
class Writer {
 public:
  void u8(std::uint8_t v) {
    buf_.push_back(static_cast<char>(v));
  }
  void u32(std::uint32_t v) {
    for (int i = 0; i < 4; ++i) u8(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  void u64(std::uint64_t v) {
    for (int i = 0; i < 8; ++i) u8(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  void f64(double v) { u64(std::bit_cast<std::uint64_t>(v)); }
  void str(const std::string& s) {
    u32(static_cast<std::uint32_t>(s.size()));
    buf_.append(s);
  }
  void raw(const char* p, std::size_t n) { buf_.append(p, n); }
  const std::string& bytes() const { return buf_; }

 private:
  std::string buf_;
};

class Reader {
 public:
  explicit Reader(std::string data) : data_(std::move(data)) {}
  std::uint8_t u8() {
    need(1);
    return static_cast<std::uint8_t>(data_[pos_++]);
  }
  std::uint32_t u32() {
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(u8()) << (8 * i);
    return v;
  }
  std::uint64_t u64() {
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(u8()) << (8 * i);
    return v;
  }
  double f64() { return std::bit_cast<double>(u64()); }
  std::string str() {
    const std::uint32_t n = u32();
    need(n);
    std::string s = data_.substr(pos_, n);
    pos_ += n;
    return s;
  }
  std::size_t pos() const { return pos_; }
  const std::string& data() const { return data_; }

 private:
  void need(std::size_t n) {
    if (pos_ + n > data_.size()) throw ParseError("checkpoint is truncated");
  }
  std::string data_;
  std::size_t pos_ = 0;
};

std::uint64_t fnv1a(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (char c : bytes) {
    h ^= static_cast<std::uint8_t>(c);
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace

void write_checkpoint(std::ostream& out, const Checkpoint& ckpt) {
  audit_shapes(ckpt.params, ckpt.config);
  Writer w;
  w.raw(kMagic, 4);
  w.u32(kCheckpointVersion);
  w.str(ckpt.industry);
  w.u64(ckpt.seed);
  w.u64(ckpt.best_epoch);

  const LSTNetConfig& c = ckpt.config;
  for (std::size_t v : {c.window, c.features, c.conv_channels, c.conv_kernel, c.rnn_hidden, c.skip_hidden,
                        c.highway_window, c.horizon, c.target_index})
    w.u64(v);
  w.u32(static_cast<std::uint32_t>(c.skip_lengths.size()));
  for (std::size_t p : c.skip_lengths) w.u64(p);

  w.u64(ckpt.window.window);
  w.u64(ckpt.window.horizon);
  w.u64(ckpt.window.target_index);
  w.u64(ckpt.window.stride);

  const NormalizationStats& s = ckpt.stats;
  w.u32(static_cast<std::uint32_t>(s.mean.size()));
  for (std::size_t i = 0; i < s.mean.size(); ++i) {
    w.f64(s.mean[i]);
    w.f64(s.stddev[i]);
  }
  w.f64(s.target_mean);
  w.f64(s.target_std);
  w.u64(s.span.begin);
  w.u64(s.span.end);

  w.u32(static_cast<std::uint32_t>(ckpt.params.tensor_count()));
  ckpt.params.visit(c, [&](const std::string& name, const Tensor& t) {
    w.str(name);
    w.u32(static_cast<std::uint32_t>(t.rank()));
    for (std::size_t d : t.shape()) w.u64(d);
    for (double v : t.values()) w.f64(v);
  });
  const std::uint64_t checksum = fnv1a(w.bytes());
  w.u64(checksum);
  out.write(w.bytes().data(), static_cast<std::streamsize>(w.bytes().size()));
  if (!out) throw Error("failed to write checkpoint");
}

Checkpoint read_checkpoint(std::istream& in) {
  std::stringstream ss;
  ss << in.rdbuf();
  Reader r(ss.str());
  if (r.data().size() < 16 || r.data().compare(0, 4, kMagic, 4) != 0) throw ParseError("not a checkpoint file");
  {
    const std::string& d = r.data();
    Reader tail(d.substr(d.size() - 8));
    if (tail.u64() != fnv1a(std::string_view(d).substr(0, d.size() - 8))) {
      throw ParseError("checkpoint checksum mismatch");
    }
  }
  for (int i = 0; i < 4; ++i) r.u8();
  const std::uint32_t version = r.u32();
  if (version != kCheckpointVersion) {
    throw ParseError("unsupported checkpoint version " + std::to_string(version));
  }
  Checkpoint ck;
  ck.industry = r.str();
  ck.seed = r.u64();
  ck.best_epoch = r.u64();
  LSTNetConfig& c = ck.config;
  for (std::size_t* v : {&c.window, &c.features, &c.conv_channels, &c.conv_kernel, &c.rnn_hidden,
                         &c.skip_hidden, &c.highway_window, &c.horizon, &c.target_index})
    *v = r.u64();
  c.skip_lengths.resize(r.u32());
  for (auto& p : c.skip_lengths) p = r.u64();
  try {
    c.validate();
  } catch (const ContractError& e) {
    throw ParseError(std::string("checkpoint holds an invalid configuration: ") + e.what());
  }

  ck.window.window = r.u64();
  ck.window.horizon = r.u64();
  ck.window.target_index = r.u64();
  ck.window.stride = r.u64();

  NormalizationStats& s = ck.stats;
  const std::uint32_t nf = r.u32();
  s.mean.resize(nf);
  s.stddev.resize(nf);
  for (std::uint32_t i = 0; i < nf; ++i) {
    s.mean[i] = r.f64();
    s.stddev[i] = r.f64();
  }
  s.target_mean = r.f64();
  s.target_std = r.f64();
  s.span.begin = r.u64();
  s.span.end = r.u64();

  const auto expected = expected_shapes(c);
  const std::uint32_t count = r.u32();
  if (count != expected.size()) {
    throw DimensionError("checkpoint holds " + std::to_string(count) + " tensors, configuration implies " +
                         std::to_string(expected.size()));
  }
  std::vector<Tensor> tensors;
  for (std::uint32_t i = 0; i < count; ++i) {
    const std::string name = r.str();
    Shape shape(r.u32());
    for (auto& d : shape) d = r.u64();
    if (name != expected[i].first || shape != expected[i].second) {
      throw DimensionError("checkpoint tensor " + name + " " + shape_to_string(shape) + " does not match " +
                           expected[i].first + " " + shape_to_string(expected[i].second));
    }
    std::vector<double> values(shape_size(shape));
    for (double& v : values) v = r.f64();
    tensors.emplace_back(std::move(shape), std::move(values));
  }
  // Rebuild the parameter struct in visit order.
  ck.params = init_params(c, 0);
  std::size_t i = 0;
  ck.params.visit(c, [&](const std::string&, Tensor& t) {
    t = std::move(tensors[i++]);
    t.set_requires_grad(true);
  });
  return ck;
}

void save_checkpoint(const std::filesystem::path& path, const Checkpoint& ckpt) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  write_checkpoint(out, ckpt);
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open checkpoint " + path.string());
  return read_checkpoint(in);
}

}  // namespace laborcast
