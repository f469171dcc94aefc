// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "laborcast/error.hpp"
#include "laborcast_app/commands.hpp"
#include "laborcast_app/config.hpp"
#include "support.hpp"

namespace laborcast::app {
namespace {

namespace fs = std::filesystem;

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct Run {
  int code = 0;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "laborcast");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  Run r;
  r.code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

// Small offline configuration over two industries.
fs::path write_smoke_ini(const fs::path& dir) {
  const auto path = dir / "smoke.ini";
  std::ofstream out(path);
  out << "[MODEL_CONFIG]\ncnn_kernel_size = 3\nrnn_hidden_size = 8\nskip_size = 4\nskip_hidden_size = 2\n"
         "highway_window = 4\ncnn_channels = 4\n\n"
         "[TRAINING_CONFIG]\nbatch_size = 32\nepochs = 2\nlearning_rate = 0.005\nsequence_length = 10\n\n"
         "[DATA]\nstart = 2016-01\nend = 2020-12\nindustries = construction, information, manufacturing\n"
         "offline = true\nfixture_dir = "
      << LABORCAST_FIXTURE_DIR << "\n";
  return path;
}

TEST(Profiles, AppendixMatchesListing) {
  const auto c = profile_config("paper-appendix");
  EXPECT_EQ(c.model.conv_kernel, 6u);
  EXPECT_EQ(c.model.rnn_hidden, 100u);
  EXPECT_EQ(c.model.skip_lengths, (std::vector<std::size_t>{24}));
  EXPECT_EQ(c.model.skip_hidden, 5u);
  EXPECT_EQ(c.model.highway_window, 24u);
  EXPECT_EQ(c.train.batch_size, 128u);
  EXPECT_EQ(c.train.epochs, 100u);
  EXPECT_EQ(c.train.learning_rate, 0.001);
  EXPECT_EQ(c.model.window, 28u);
  EXPECT_EQ(c.train.test_fraction, 0.2);
  EXPECT_EQ(c.train.val_fraction, 0.2);
  EXPECT_EQ(c.model.horizon, 7u);
}

TEST(Profiles, ProseValues) {
  const auto c = profile_config("paper-prose");
  EXPECT_EQ(c.model.window, 30u);
  EXPECT_EQ(c.model.conv_channels, 32u);
  EXPECT_EQ(c.model.conv_kernel, 7u);
  EXPECT_EQ(c.model.rnn_hidden, 64u);
  EXPECT_EQ(c.model.skip_lengths, (std::vector<std::size_t>{4, 24}));
  EXPECT_THROW(profile_config("paper-draft"), ConfigError);
}

TEST(Ini, ListingBlockPastesIn) {
  std::istringstream in(
      "MODEL_CONFIG = {\n    'cnn_kernel_size': 6,  \n    'rnn_hidden_size': 50, \n    'skip_size': 24, \n"
      "    'skip_hidden_size': 5,\n    'highway_window': 24, \n}\n\n"
      "TRAINING_CONFIG = {\n    'batch_size': 128,\n    'epochs': 12,\n    'learning_rate': 0.01,\n"
      "    'sequence_length': 28, \n    'test_size': 0.2,\n    'val_size': 0.2,\n}\n");
  const auto c = apply_ini(profile_config("paper-appendix"), in);
  EXPECT_EQ(c.model.rnn_hidden, 50u);
  EXPECT_EQ(c.model.conv_kernel, 6u);
  EXPECT_EQ(c.train.epochs, 12u);
  EXPECT_EQ(c.train.learning_rate, 0.01);
  EXPECT_EQ(c.model.window, 28u);
}

TEST(Ini, EchoRoundTrips) {
  for (const char* profile : {"paper-appendix", "paper-prose"}) {
    auto c = profile_config(profile);
    c.industries = {"construction", "information"};
    c.train.seed = 99;
    std::stringstream echo;
    write_config_ini(echo, c);
    const auto back = apply_ini(profile_config("paper-appendix"), echo);
    std::stringstream again;
    write_config_ini(again, back);
    EXPECT_EQ(echo.str(), again.str());
  }
}

TEST(Ini, UnknownKeysRejected) {
  std::istringstream typo("[MODEL_CONFIG]\ncnn_kernal_size = 6\n");
  EXPECT_THROW(apply_ini(profile_config("paper-appendix"), typo), ConfigError);
  std::istringstream section("[MODEL]\ncnn_kernel_size = 6\n");
  EXPECT_THROW(apply_ini(profile_config("paper-appendix"), section), ConfigError);
  std::istringstream value("[TRAINING_CONFIG]\nepochs = many\n");
  EXPECT_THROW(apply_ini(profile_config("paper-appendix"), value), ConfigError);
}

TEST(Cli, ExitCodes) {
  testing::TempDir dir("cli_codes");
  const auto bad = dir.path() / "bad.ini";
  std::ofstream(bad) << "[TRAINING_CONFIG]\nepoch = 3\n";
  EXPECT_EQ(run({"--config", bad.string(), "prepare"}).code, kExitConfig);
  EXPECT_EQ(run({"--bogus-flag"}).code, kExitConfig);
  EXPECT_EQ(run({"--help"}).code, kExitOk);
  EXPECT_EQ(run({"--profile", "paper-draft", "prepare"}).code, kExitConfig);
  EXPECT_EQ(run({"train", "--industry", "no_such_sector"}).code, kExitConfig);
}

TEST(Cli, OnlineFetchNeedsKey) {
  testing::TempDir dir("cli_key");
  ::unsetenv(kApiKeyEnv);
  const auto r = run({"--out", dir.path().string(), "fetch", "--industry", "construction"});
  EXPECT_EQ(r.code, kExitConfig);
  EXPECT_NE(r.err.find(kApiKeyEnv), std::string::npos) << r.err;
}

TEST(Cli, MissingInputsNameTheCommandToRun) {
  testing::TempDir dir("cli_missing");
  const auto ini = write_smoke_ini(dir.path());
  auto r = run({"--config", ini.string(), "--out", (dir.path() / "o").string(), "train"});
  EXPECT_EQ(r.code, kExitRuntime);
  EXPECT_NE(r.err.find("laborcast fetch"), std::string::npos) << r.err;
  ASSERT_EQ(run({"--config", ini.string(), "--out", (dir.path() / "o").string(), "fetch"}).code, kExitOk);
  r = run({"--config", ini.string(), "--out", (dir.path() / "o").string(), "evaluate"});
  EXPECT_EQ(r.code, kExitRuntime);
  EXPECT_NE(r.err.find("laborcast train"), std::string::npos) << r.err;
}

TEST(Cli, EndToEndIsReproducible) {
  testing::TempDir dir("cli_e2e");
  const auto ini = write_smoke_ini(dir.path());
  const auto a = dir.path() / "a";
  const auto b = dir.path() / "b";
  for (const auto& root : {a, b}) {
    const std::vector<std::string> base{"--config", ini.string(), "--out", root.string()};
    for (std::vector<std::string> cmd : {std::vector<std::string>{"fetch"}, {"prepare"}, {"train", "--jobs", "2"},
                                         {"evaluate"}, {"baselines"}, {"forecast"}, {"iehi"}}) {
      cmd.insert(cmd.begin(), base.begin(), base.end());
      const auto r = run(cmd);
      ASSERT_EQ(r.code, kExitOk) << cmd[4] << ": " << r.err;
    }
  }
  for (const char* rel : {"panels/construction.csv", "panels/panels.csv", "checkpoints/construction.ckpt",
                          "checkpoints/manufacturing.ckpt", "reports/metrics.csv", "reports/baselines.csv",
                          "reports/iehi.csv", "reports/predictions/information.csv",
                          "reports/forecasts/construction.csv", "reports/splits.csv"}) {
    ASSERT_TRUE(fs::exists(a / rel)) << rel;
    EXPECT_EQ(slurp(a / rel), slurp(b / rel)) << rel;
  }
  const std::string metrics = slurp(a / "reports/metrics.csv");
  EXPECT_EQ(metrics.rfind("# laborcast-metrics/1\nindustry,mse,mae,smape,rmse,n\n", 0), 0u) << metrics;
  EXPECT_NE(slurp(a / "reports/iehi.csv").find("# spearman_rho="), std::string::npos);

  // Fetching again over an existing directory rewrites identical panels.
  const auto before = slurp(a / "panels/panels.csv");
  ASSERT_EQ(run({"--config", ini.string(), "--out", a.string(), "fetch"}).code, kExitOk);
  EXPECT_EQ(slurp(a / "panels/panels.csv"), before);

  // The checkpoint reloads to the same forecast.
  RunConfig cfg = apply_ini_file(profile_config("paper-appendix"), ini);
  cfg.panel_dir = a / "panels";
  cfg.checkpoint_dir = a / "checkpoints";
  const auto ck = load_industry_checkpoint(cfg, "construction");
  EXPECT_EQ(ck.best_epoch >= 1 && ck.best_epoch <= 2, true);
  EXPECT_EQ(ck.config, cfg.model);

  // A different seed changes the trained weights.
  const auto c = dir.path() / "c";
  ASSERT_EQ(run({"--config", ini.string(), "--out", c.string(), "fetch"}).code, kExitOk);
  ASSERT_EQ(run({"--config", ini.string(), "--out", c.string(), "--seed", "7", "train", "--industry",
                 "construction"})
                .code,
            kExitOk);
  EXPECT_NE(slurp(c / "checkpoints/construction.ckpt"), slurp(a / "checkpoints/construction.ckpt"));
}

TEST(Cli, PublishedRankingFixture) {
  testing::TempDir dir("cli_table");
  const auto r = run({"--out", dir.path().string(), "iehi", "--validation-fixture", LABORCAST_TABLE5_FIXTURE});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_NE(r.out.find("0.95"), std::string::npos) << r.out;
  EXPECT_TRUE(fs::exists(dir.path() / "reports/iehi_validation.csv"));
}

}  // namespace
}  // namespace laborcast::app
