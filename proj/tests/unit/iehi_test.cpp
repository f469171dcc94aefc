// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

#include "laborcast/error.hpp"
#include "laborcast/iehi.hpp"
#include "laborcast/rng.hpp"
#include "support.hpp"

namespace laborcast {
namespace {

using V = std::vector<double>;

V noise(std::uint64_t seed, double scale, std::size_t n = 40) {
  Rng rng(seed);
  V v(n);
  for (auto& x : v) x = scale * rng.normal();
  return v;
}

IEHIInputs make(std::string name, double vol, double sep, double hire, double trend, std::uint64_t seed = 1) {
  IEHIInputs in;
  in.industry = std::move(name);
  in.trajectory = noise(seed, vol);
  for (auto& x : in.trajectory) x += trend;
  in.separation_rate = sep;
  in.hiring_stability = hire;
  in.trend = trend;
  return in;
}

TEST(SmoothedVolatility, Examples) {
  EXPECT_EQ(smoothed_volatility(V(20, 3.0), 5), 0.0);
  V alt;
  for (int i = 0; i < 30; ++i) alt.push_back(i % 2 ? -1.0 : 1.0);
  EXPECT_NEAR(smoothed_volatility(alt, 2), std::sqrt(2.0), 1e-12);
  EXPECT_THROW(smoothed_volatility(V{1, 2}, 3), ContractError);
  EXPECT_THROW(smoothed_volatility(V{1, 2, 3}, 1), ContractError);
}

TEST(SmoothedVolatility, Homogeneous) {
  const V t = noise(4, 1.0);
  for (double c : {-3.0, 0.5, 10.0}) {
    V s = t;
    for (auto& x : s) x *= c;
    EXPECT_NEAR(smoothed_volatility(s, 12), std::abs(c) * smoothed_volatility(t, 12), 1e-12);
  }
}

TEST(ComputeIehi, ParetoDominance) {
  const std::vector<IEHIInputs> in{make("weak", 2.0, 0.05, 0.02, -0.1, 1), make("strong", 0.5, 0.02, 0.01, 0.1, 2)};
  const auto r = compute_iehi(in);
  EXPECT_EQ(r.entries[1].rank, 1.0);
  EXPECT_EQ(r.entries[0].rank, 2.0);
  EXPECT_DOUBLE_EQ(r.entries[1].score, 1.0);
  EXPECT_DOUBLE_EQ(r.entries[0].score, 0.0);
}

TEST(ComputeIehi, EqualInputsTie) {
  std::vector<IEHIInputs> in;
  for (int i = 0; i < 4; ++i) in.push_back(make("i" + std::to_string(i), 1.0, 0.03, 0.01, 0.0, 9));
  const auto r = compute_iehi(in);
  for (const auto& e : r.entries) {
    EXPECT_DOUBLE_EQ(e.score, 0.5);
    EXPECT_EQ(e.rank, 2.5);
    EXPECT_EQ(e.components.volatility, 0.5);
  }
}

TEST(ComputeIehi, MonotoneFixtureFollowsPublishedOrder) {
  const std::vector<std::string> order{"Financial Activities", "Education Services", "Professional Services",
                                       "Construction", "Transportation", "Leisure/Hospitality",
                                       "Other Services", "Information", "Manufacturing", "Natural Resources"};
  // Worse on every signal as the published rank grows; fed in scrambled order.
  const std::vector<std::size_t> feed{7, 2, 9, 0, 5, 3, 8, 1, 6, 4};
  std::vector<IEHIInputs> in;
  for (std::size_t k : feed) {
    const double r = static_cast<double>(k);
    in.push_back(make(order[k], 0.5 + 0.3 * r, 0.02 + 0.004 * r, 0.01 + 0.002 * r, 0.05 - 0.01 * r, 100));
  }
  const auto report = compute_iehi(in);
  for (std::size_t i = 0; i < feed.size(); ++i) {
    EXPECT_EQ(report.entries[i].industry, order[feed[i]]);
    EXPECT_EQ(report.entries[i].rank, static_cast<double>(feed[i] + 1)) << order[feed[i]];
  }
}

TEST(ComputeIehi, ScoresAndComponentsInUnitInterval) {
  Rng rng(31);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<IEHIInputs> in;
    const std::size_t n = 2 + rng.below(10);
    for (std::size_t i = 0; i < n; ++i)
      in.push_back(make(std::to_string(i), rng.uniform(0.1, 3), rng.uniform(0, 0.1), rng.uniform(0, 0.05),
                        rng.normal() * 0.1, rng.next()));
    const auto r = compute_iehi(in);
    V ranks;
    for (const auto& e : r.entries) {
      EXPECT_GE(e.score, 0.0);
      EXPECT_LE(e.score, 1.0);
      for (double c : {e.components.volatility, e.components.separation, e.components.hiring, e.components.trend}) {
        EXPECT_GE(c, 0.0);
        EXPECT_LE(c, 1.0);
      }
      ranks.push_back(e.rank);
    }
    std::sort(ranks.begin(), ranks.end());
    EXPECT_DOUBLE_EQ(std::accumulate(ranks.begin(), ranks.end(), 0.0), static_cast<double>(n * (n + 1)) / 2.0);
  }
}

TEST(ComputeIehi, LowerVolatilityNeverHurts) {
  Rng rng(12);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<IEHIInputs> in;
    for (std::size_t i = 0; i < 6; ++i)
      in.push_back(make(std::to_string(i), rng.uniform(0.5, 2), rng.uniform(0, 0.1), rng.uniform(0, 0.05),
                        rng.normal() * 0.1, rng.next()));
    const double before = compute_iehi(in).entries[0].rank;
    for (auto& x : in[0].trajectory) x = in[0].trend + (x - in[0].trend) * 0.5;
    EXPECT_LE(compute_iehi(in).entries[0].rank, before);
  }
}

TEST(ComputeIehi, RanksInvariantUnderWeightScale) {
  std::vector<IEHIInputs> in;
  for (std::size_t i = 0; i < 8; ++i)
    in.push_back(make(std::to_string(i), 0.3 + 0.2 * static_cast<double>(i % 3), 0.01 * static_cast<double>(i),
                      0.02 - 0.001 * static_cast<double>(i), 0.0, i + 1));
  const auto r = compute_iehi(in);
  const IEHIWeights w;
  for (double c : {0.1, 2.0, 37.0}) {
    V scores;
    for (const auto& e : r.entries)
      scores.push_back(c * (w.volatility * e.components.volatility + w.separation * e.components.separation +
                            w.hiring * e.components.hiring + w.trend * e.components.trend) +
                       5.0);
    const auto ranks = rank_descending(scores);
    for (std::size_t i = 0; i < ranks.size(); ++i) EXPECT_EQ(ranks[i], r.entries[i].rank);
  }
}

TEST(ComputeIehi, Errors) {
  const std::vector<IEHIInputs> one{make("a", 1, 0.1, 0.1, 0)};
  EXPECT_THROW(compute_iehi(one), RankingError);
  std::vector<IEHIInputs> two{make("a", 1, 0.1, 0.1, 0), make("b", 1, 0.1, 0.1, 0)};
  IEHIWeights bad;
  bad.trend = 0.5;
  EXPECT_THROW(compute_iehi(two, bad), ContractError);
  bad = {};
  bad.volatility = -0.1;
  bad.separation = 0.75;
  EXPECT_THROW(compute_iehi(two, bad), ContractError);
  two[1].separation_rate = std::nan("");
  EXPECT_THROW(compute_iehi(two), ContractError);
  two[1].separation_rate = 0.1;
  two[1].trajectory.clear();
  EXPECT_THROW(compute_iehi(two), ContractError);
}

TEST(PanelInputs, RatesFromPanel) {
  auto panel = testing::make_panel(30, [](std::size_t r, std::size_t f) {
    if (f == index_of(Indicator::kEmployees)) return 1000.0;
    if (f == index_of(Indicator::kSeparations)) return 30.0;
    if (f == index_of(Indicator::kHires)) return r % 2 ? 40.0 : 20.0;
    return 1.0;
  });
  const auto in = iehi_inputs_from_panel(panel, RowSpan{10, 30}, V{0.01, 0.03}, 2);
  EXPECT_NEAR(in.separation_rate, 0.03, 1e-15);
  EXPECT_NEAR(in.hiring_stability, std::sqrt(2.0) * 0.01, 1e-15);
  EXPECT_NEAR(in.trend, 0.02, 1e-15);
}

TEST(ValidateRanking, PublishedTable) {
  const std::vector<IndustryValue> ranks{{"Financial Activities", 1}, {"Education Services", 2},
                                         {"Professional Services", 3}, {"Construction", 4},
                                         {"Transportation", 5}, {"Leisure/Hospitality", 6},
                                         {"Other Services", 7}, {"Information", 8},
                                         {"Manufacturing", 9}, {"Natural Resources", 10}};
  const std::vector<IndustryValue> errors{{"Natural Resources", 52.94}, {"Financial Activities", 13.42},
                                          {"Education Services", 13.08}, {"Professional Services", 16.94},
                                          {"Construction", 21.44}, {"Transportation", 32.96},
                                          {"Leisure/Hospitality", 18.13}, {"Other Services", 33.72},
                                          {"Information", 41.09}, {"Manufacturing", 51.32}};
  const auto c = validate_ranking(ranks, errors);
  EXPECT_NEAR(c.rho, 0.95, 0.005);
  EXPECT_GT(c.p_value, 2.28e-05 / 1.5);
  EXPECT_LT(c.p_value, 2.28e-05 * 1.5);
}

TEST(ValidateRanking, IdenticalOrderIsOne) {
  const std::vector<IndustryValue> ranks{{"a", 1}, {"b", 2}, {"c", 3}, {"d", 4}};
  const std::vector<IndustryValue> errors{{"a", 10}, {"b", 20}, {"c", 25}, {"d", 90}};
  EXPECT_NEAR(validate_ranking(ranks, errors).rho, 1.0, 1e-12);
}

TEST(ValidateRanking, ShuffledRanksAverageNearZero) {
  Rng rng(99);
  V errors(10);
  for (auto& e : errors) e = rng.uniform(10, 60);
  std::vector<IndustryValue> errs;
  for (std::size_t i = 0; i < 10; ++i) errs.push_back({"s" + std::to_string(i), errors[i]});
  V ranks{1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
  double total = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    rng.shuffle(ranks.begin(), ranks.end());
    std::vector<IndustryValue> rk;
    for (std::size_t i = 0; i < 10; ++i) rk.push_back({"s" + std::to_string(i), ranks[i]});
    total += validate_ranking(rk, errs).rho;
  }
  // rho has standard deviation 1/3 under the null; the mean of 1000 draws about 0.01.
  EXPECT_LT(std::abs(total / 1000.0), 0.05);
}

TEST(ValidateRanking, MismatchedSetsListed) {
  const std::vector<IndustryValue> ranks{{"a", 1}, {"b", 2}, {"c", 3}};
  const std::vector<IndustryValue> errors{{"a", 1}, {"b", 2}, {"z", 3}};
  try {
    validate_ranking(ranks, errors);
    FAIL();
  } catch (const JoinError& e) {
    const std::string msg = e.what();
    EXPECT_NE(msg.find("only ranked: [c]"), std::string::npos) << msg;
    EXPECT_NE(msg.find("only scored: [z]"), std::string::npos) << msg;
  }
}

}  // namespace
}  // namespace laborcast
