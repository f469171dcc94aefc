// SPDX-License-Identifier: Apache-2.0
// Writes synthetic BLS v2 responses, one file per catalog series, so the
// pipeline can run offline.
#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "laborcast/bls_client.hpp"
#include "laborcast/panel.hpp"
#include "laborcast/synthetic.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Generate offline BLS fixtures"};
  std::string dir = "data/fixtures/bls";
  std::uint64_t seed = 2006;
  int first_year = 2006;
  int last_year = 2024;
  app.add_option("--dir", dir, "Output directory");
  app.add_option("--seed", seed, "Generator seed");
  app.add_option("--first-year", first_year);
  app.add_option("--last-year", last_year);
  CLI11_PARSE(app, argc, argv);

  namespace lc = laborcast;
  std::filesystem::create_directories(dir);
  const auto catalog = lc::industry_catalog();
  for (std::size_t i = 0; i < catalog.size(); ++i) {
    const auto series = lc::synthetic_monthly(i, {first_year, 1}, {last_year, 12}, seed);
    for (std::size_t k = 0; k < lc::kIndicatorCount; ++k) {
      const auto id = catalog[i].series_ids[k];
      std::ofstream out(std::filesystem::path(dir) / (std::string(id) + ".json"), std::ios::binary);
      out << lc::format_bls_response(id, series[k]) << '\n';
      if (!out) {
        std::cerr << "cannot write fixture for " << id << '\n';
        return 1;
      }
    }
  }
  std::cout << "wrote " << catalog.size() * lc::kIndicatorCount << " series to " << dir << '\n';
  return 0;
}
