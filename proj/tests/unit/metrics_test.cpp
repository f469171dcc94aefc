// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "laborcast/error.hpp"
#include "laborcast/metrics.hpp"
#include "laborcast/rng.hpp"

namespace laborcast {
namespace {

using V = std::vector<double>;

// Published SMAPE column and IEHI ranks, in table order.
const V kTableSmape{13.42, 13.08, 16.94, 21.44, 32.96, 18.13, 33.72, 41.09, 51.32, 52.94};
const V kTableRank{1, 2, 3, 4, 5, 6, 7, 8, 9, 10};

TEST(Smape, Examples) {
  EXPECT_EQ(smape(V{1, 1}, V{1, 1}), 0.0);
  EXPECT_EQ(smape(V{1}, V{0}), 200.0);
  EXPECT_NEAR(smape(V{3}, V{1}), 100.0, 1e-9);
  EXPECT_EQ(smape(V{0, 2}, V{0, 2}), 0.0);
}

TEST(Rmse, Examples) {
  EXPECT_EQ(rmse(V{1, 2, 3}, V{1, 2, 3}), 0.0);
  EXPECT_NEAR(rmse(V{0, 0}, V{3, 4}), 3.5355339059327378, 1e-9);
  EXPECT_EQ(rmse(V{2}, V{-5}), 7.0);
}

TEST(Mae, Examples) {
  EXPECT_EQ(mae(V{4, 5}, V{4, 5}), 0.0);
  EXPECT_NEAR(mae(V{0, 0}, V{1, 3}), 2.0, 1e-9);
}

TEST(Metrics, ContractViolations) {
  EXPECT_THROW(smape(V{}, V{}), ContractError);
  EXPECT_THROW(rmse(V{1}, V{1, 2}), ContractError);
  EXPECT_THROW(mae(V{1, 2}, V{1}), ContractError);
  EXPECT_THROW(spearman_rho(V{1, 2}, V{1, 2}), ContractError);
}

TEST(Mape, SkipsZeroActuals) {
  EXPECT_NEAR(*mape(V{0, 2}, V{1, 1}), 50.0, 1e-12);
  EXPECT_FALSE(mape(V{0, 0}, V{1, 1}).has_value());
}

TEST(MetricsProperty, SmapeBoundedAndSymmetric) {
  Rng rng(2024);
  for (int trial = 0; trial < 10000; ++trial) {
    const std::size_t n = 1 + rng.below(12);
    V y(n), p(n);
    for (std::size_t i = 0; i < n; ++i) {
      // Mix magnitudes and exact zeros.
      y[i] = rng.below(8) == 0 ? 0.0 : rng.normal() * std::pow(10.0, rng.uniform(-3, 3));
      p[i] = rng.below(8) == 0 ? 0.0 : rng.normal() * std::pow(10.0, rng.uniform(-3, 3));
    }
    const double s = smape(y, p);
    ASSERT_GE(s, 0.0);
    ASSERT_LE(s, 200.0);
    ASSERT_EQ(s, smape(p, y));
    ASSERT_LE(mae(y, p), rmse(y, p) * (1 + 1e-12));
  }
}

TEST(MetricsProperty, JointScaling) {
  Rng rng(5);
  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t n = 1 + rng.below(20);
    V y(n), p(n);
    for (std::size_t i = 0; i < n; ++i) {
      y[i] = rng.normal();
      p[i] = rng.normal();
    }
    const double c = rng.uniform(0.01, 100.0);
    V cy = y, cp = p;
    for (auto& v : cy) v *= c;
    for (auto& v : cp) v *= c;
    EXPECT_NEAR(rmse(cy, cp), c * rmse(y, p), 1e-9 * c * (1 + rmse(y, p)));
    EXPECT_NEAR(mae(cy, cp), c * mae(y, p), 1e-9 * c * (1 + mae(y, p)));
    EXPECT_NEAR(smape(cy, cp), smape(y, p), 1e-9);
  }
}

TEST(AverageRanks, TiesShareTheMean) {
  EXPECT_EQ(average_ranks(V{10, 20, 20, 5}), (V{2, 3.5, 3.5, 1}));
  EXPECT_EQ(average_ranks(V{7, 7, 7}), (V{2, 2, 2}));
}

TEST(Spearman, Examples) {
  EXPECT_NEAR(spearman_rho(V{1, 2, 3}, V{1, 2, 3}).rho, 1.0, 1e-12);
  EXPECT_NEAR(spearman_rho(V{1, 2, 3}, V{3, 2, 1}).rho, -1.0, 1e-12);
}

TEST(Spearman, PublishedRankingTable) {
  const auto c = spearman_rho(kTableSmape, kTableRank);
  EXPECT_NEAR(c.rho, 0.95, 0.005);
  EXPECT_NEAR(c.rho, 0.9515151515151515, 1e-12);
  EXPECT_NEAR(c.p_value, 2.279854920641689e-05, 1e-12);
  EXPECT_GT(c.p_value, 2.28e-05 / 1.5);
  EXPECT_LT(c.p_value, 2.28e-05 * 1.5);
}

TEST(Spearman, ExactPermutationAgreesInOrderOfMagnitude) {
  const double exact = spearman_exact_p(kTableSmape, kTableRank);
  const auto approx = spearman_rho(kTableSmape, kTableRank).p_value;
  EXPECT_GT(exact, 0.0);
  EXPECT_LT(exact, 1e-3);
  EXPECT_LT(std::abs(std::log10(exact) - std::log10(approx)), 1.0);
  // Three perfectly ordered pairs: 2 of 6 permutations reach |rho| = 1.
  EXPECT_NEAR(spearman_exact_p(V{1, 2, 3}, V{4, 5, 6}), 2.0 / 6.0, 1e-12);
}

TEST(Spearman, ConstantListIsUndefined) {
  EXPECT_THROW(spearman_rho(V{1, 1, 1, 1}, V{1, 2, 3, 4}), UndefinedCorrelationError);
  EXPECT_THROW(spearman_rho(V{1, 2, 3, 4}, V{2, 2, 2, 2}), UndefinedCorrelationError);
}

TEST(SpearmanProperty, MonotoneTransformInvariance) {
  Rng rng(77);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = 3 + rng.below(15);
    V a(n), b(n);
    for (std::size_t i = 0; i < n; ++i) {
      a[i] = rng.normal();
      b[i] = rng.normal();
    }
    if (std::adjacent_find(a.begin(), a.end()) != a.end()) continue;
    V ta = a, tb = b;
    for (auto& v : ta) v = std::exp(3.0 * v) + 1.0;
    for (auto& v : tb) v = v * v * v - 7.0;
    EXPECT_NEAR(spearman_rho(a, b).rho, spearman_rho(ta, tb).rho, 1e-12);
  }
}

TEST(SpearmanProperty, TieFreeClosedForm) {
  Rng rng(13);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = 3 + rng.below(30);
    V a(n), b(n);
    for (std::size_t i = 0; i < n; ++i) {
      a[i] = rng.uniform();
      b[i] = rng.uniform();
    }
    const V ra = average_ranks(a), rb = average_ranks(b);
    double d2 = 0.0;
    for (std::size_t i = 0; i < n; ++i) d2 += (ra[i] - rb[i]) * (ra[i] - rb[i]);
    const double nn = static_cast<double>(n);
    const double closed = 1.0 - 6.0 * d2 / (nn * (nn * nn - 1.0));
    EXPECT_NEAR(spearman_rho(a, b).rho, closed, 1e-12);
  }
}

}  // namespace
}  // namespace laborcast
