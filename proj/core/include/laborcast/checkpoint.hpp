// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>

#include "laborcast/lstnet.hpp"
#include "laborcast/windows.hpp"

namespace laborcast {

// Everything needed to reproduce a trained model's forecasts. The on-disk
// layout is documented in docs/checkpoint_format.md.
struct Checkpoint {
  std::string industry;
  std::uint64_t seed = 0;
  std::size_t best_epoch = 0;
  LSTNetConfig config;
  WindowSpec window;
  NormalizationStats stats;
  LSTNetParams params;
};

inline constexpr std::uint32_t kCheckpointVersion = 1;

void write_checkpoint(std::ostream& out, const Checkpoint& ckpt);
// Throws ParseError on a bad magic, unsupported version, truncation or
// checksum mismatch, and DimensionError when tensors disagree with the
// stored configuration.
Checkpoint read_checkpoint(std::istream& in);

void save_checkpoint(const std::filesystem::path& path, const Checkpoint& ckpt);
Checkpoint load_checkpoint(const std::filesystem::path& path);

}  // namespace laborcast
