// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <functional>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "laborcast/bls_client.hpp"
#include "laborcast/checkpoint.hpp"
#include "laborcast/panel.hpp"
#include "laborcast_app/config.hpp"

namespace laborcast::app {

// Exit codes of the command-line tool.
inline constexpr int kExitOk = 0;
inline constexpr int kExitRuntime = 1;
inline constexpr int kExitConfig = 2;

inline constexpr const char* kApiKeyEnv = "BLS_API_KEY";
inline constexpr const char* kResolvedConfigName = "resolved_config.ini";

// File locations derived from a RunConfig.
std::filesystem::path panel_path(const RunConfig& config, const std::string& slug);
std::filesystem::path checkpoint_path(const RunConfig& config, const std::string& slug);

// Reads the prepared panel of one industry. Throws DataError naming the
// fetch command when the file is missing.
TimeSeriesPanel load_panel(const RunConfig& config, const std::string& slug);
// Throws DataError naming the train command when the checkpoint is missing.
Checkpoint load_industry_checkpoint(const RunConfig& config, const std::string& slug);

// Writes per-industry panel CSVs plus panels.csv. `api_key` is required
// unless the config is offline.
void cmd_fetch(const RunConfig& config, const std::optional<std::string>& api_key, std::ostream& log);
// Audits panels and writes the window split summary.
void cmd_prepare(const RunConfig& config, std::ostream& log);
// Trains one model per industry, `jobs` at a time.
void cmd_train(const RunConfig& config, std::size_t jobs, std::ostream& log);
// Metric, baseline and IEHI tables plus per-industry prediction CSVs.
void cmd_evaluate(const RunConfig& config, bool diagnostic, std::ostream& log);
void cmd_baselines(const RunConfig& config, std::ostream& log);
void cmd_forecast(const RunConfig& config, std::ostream& log);
// Either the IEHI table from trained models, or, with a fixture, the rank
// validation of a published (SMAPE, rank) table.
void cmd_iehi(const RunConfig& config, const std::optional<std::filesystem::path>& validation_fixture,
              std::ostream& log);

// Parses arguments and runs a subcommand. Returns an exit code.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace laborcast::app
