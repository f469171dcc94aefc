// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "laborcast/iehi.hpp"
#include "laborcast/interpolation.hpp"
#include "laborcast/lstnet.hpp"
#include "laborcast/training.hpp"

namespace laborcast::app {

// Everything a subcommand needs. Built from a profile, then an optional INI
// file, then command-line overrides.
struct RunConfig {
  std::string profile = "paper-appendix";
  LSTNetConfig model;
  TrainConfig train;
  YearMonth first{2008, 3};
  YearMonth last{2024, 12};
  std::vector<std::string> industries;  // slugs; empty means the full catalog
  std::filesystem::path panel_dir = "out/panels";
  std::filesystem::path checkpoint_dir = "out/checkpoints";
  std::filesystem::path report_dir = "out/reports";
  std::filesystem::path fixture_dir = "data/fixtures/bls";
  std::string api_base_url = "https://api.bls.gov";
  bool offline = false;
  IEHIWeights iehi_weights;
  std::size_t volatility_window = 12;
  std::size_t max_parallel_fetches = 4;

  // Throws ConfigError.
  void validate() const;
  // Catalog slugs of the selected industries.
  std::vector<std::string> industry_slugs() const;
};

// Known profile names: paper-appendix, paper-prose. Throws ConfigError.
RunConfig profile_config(std::string_view name);

// Applies an INI document on top of `base`. Unknown sections or keys are a
// ConfigError so typos do not silently fall back to defaults.
RunConfig apply_ini(const RunConfig& base, std::istream& in);
RunConfig apply_ini_file(const RunConfig& base, const std::filesystem::path& path);

// Fully-resolved INI echo; apply_ini(profile_config(profile), echo) gives back
// the same configuration.
void write_config_ini(std::ostream& out, const RunConfig& config);

}  // namespace laborcast::app
