// SPDX-License-Identifier: Apache-2.0
#include <CLI11.hpp>
#include <cstdlib>
#include <ostream>

#include "laborcast/error.hpp"
#include "laborcast/panel.hpp"
#include "laborcast_app/commands.hpp"

namespace laborcast::app {

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Employment-change forecasting and industry health index"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_file;
  std::string profile;
  std::uint64_t seed = 0;
  bool offline = false;
  std::string out_dir;
  app.add_option("--config", config_file, "INI configuration file")->check(CLI::ExistingFile);
  app.add_option("--profile", profile, "paper-appendix or paper-prose");
  auto* seed_opt = app.add_option("--seed", seed, "Random seed for initialization and shuffling");
  app.add_flag("--offline", offline, "Serve BLS requests from the fixture directory");
  app.add_option("--out", out_dir, "Root for panels/, checkpoints/ and reports/");

  std::vector<std::string> industries;
  bool all_industries = false;
  std::size_t jobs = 1;
  std::size_t epochs = 0;
  bool diagnostic = false;
  std::string fixture;

  auto* fetch = app.add_subcommand("fetch", "Download series and build weekly panels");
  auto* prepare = app.add_subcommand("prepare", "Audit panels and report the window split");
  auto* train = app.add_subcommand("train", "Train one model per industry");
  auto* evaluate = app.add_subcommand("evaluate", "Metric, baseline and IEHI tables from checkpoints");
  auto* baselines = app.add_subcommand("baselines", "Persistence and oracle baseline table");
  auto* forecast = app.add_subcommand("forecast", "Forecast the next horizon from the latest window");
  auto* iehi = app.add_subcommand("iehi", "Industry Employment Health Index");
  for (auto* sub : {fetch, prepare, train, evaluate, baselines, forecast, iehi}) {
    sub->add_option("--industry", industries, "Industry slug or name (repeatable)");
  }
  train->add_flag("--all-industries", all_industries, "Train every catalog industry");
  auto* epochs_opt = train->add_option("--epochs", epochs, "Override the configured epoch count");
  train->add_option("--jobs", jobs, "Industries trained concurrently")->check(CLI::PositiveNumber);
  evaluate->add_flag("--diagnostic", diagnostic, "Add the MAPE column");
  iehi->add_option("--validation-fixture", fixture, "CSV of industry,smape,iehi_rank to validate")
      ->check(CLI::ExistingFile);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    RunConfig config = profile_config(profile.empty() ? "paper-appendix" : profile);
    if (!config_file.empty()) {
      config = apply_ini_file(config, config_file);
      if (!profile.empty() && config.profile != profile) {
        throw ConfigError("--profile " + profile + " conflicts with profile " + config.profile + " in " + config_file);
      }
    }
    if (offline) config.offline = true;
    if (*seed_opt) config.train.seed = seed;
    if (*epochs_opt) config.train.epochs = epochs;
    if (!out_dir.empty()) {
      config.panel_dir = std::filesystem::path(out_dir) / "panels";
      config.checkpoint_dir = std::filesystem::path(out_dir) / "checkpoints";
      config.report_dir = std::filesystem::path(out_dir) / "reports";
    }
    if (!industries.empty() && all_industries) throw ConfigError("--industry and --all-industries are exclusive");
    if (!industries.empty()) {
      config.industries.clear();
      for (const auto& s : industries) config.industries.emplace_back(find_industry(s).slug);
    } else if (all_industries) {
      config.industries.clear();
    }
    config.validate();

    if (fetch->parsed()) {
      std::optional<std::string> key;
      if (const char* k = std::getenv(kApiKeyEnv)) key = k;
      cmd_fetch(config, key, out);
    } else if (prepare->parsed()) {
      cmd_prepare(config, out);
    } else if (train->parsed()) {
      cmd_train(config, jobs, out);
    } else if (evaluate->parsed()) {
      cmd_evaluate(config, diagnostic, out);
    } else if (baselines->parsed()) {
      cmd_baselines(config, out);
    } else if (forecast->parsed()) {
      cmd_forecast(config, out);
    } else if (iehi->parsed()) {
      cmd_iehi(config, fixture.empty() ? std::nullopt : std::optional<std::filesystem::path>(fixture), out);
    }
    return kExitOk;
  } catch (const ConfigError& e) {
    err << "configuration error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const DivergenceError& e) {
    err << "training diverged: " << e.what() << '\n';
    return kExitRuntime;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
}

}  // namespace laborcast::app
