// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <span>
#include <string>
#include <utility>
#include <vector>

#include "laborcast/metrics.hpp"
#include "laborcast/panel.hpp"
#include "laborcast/windows.hpp"

namespace laborcast {

// Industry Employment Health Index.
//
// Four raw signals per industry are min-max scaled across industries into
// sub-scores where 1 is healthiest:
//   volatility  smoothed volatility of the predicted change trajectory (lower is better)
//   separation  separations / employees (lower is better)
//   hiring      rolling std of hires / employees (lower is better)
//   trend       mean predicted change (higher is better)
// The score is the weighted sum of the sub-scores, so it lies in [0, 1].
// A signal that is equal for every industry scores 0.5 everywhere.

struct IEHIWeights {
  double volatility = 0.4;
  double separation = 0.25;
  double hiring = 0.2;
  double trend = 0.15;

  // Non-negative and summing to 1 (within 1e-9). Throws ContractError.
  void validate() const;
};

struct IEHIInputs {
  std::string industry;
  std::vector<double> trajectory;  // predicted changes, relative to the employment level
  double separation_rate = 0.0;
  double hiring_stability = 0.0;  // mean rolling std of the hires rate
  double trend = 0.0;
};

struct IEHIComponents {
  double volatility = 0.0;
  double separation = 0.0;
  double hiring = 0.0;
  double trend = 0.0;
};

struct IEHIEntry {
  std::string industry;
  double score = 0.0;
  double rank = 0.0;  // 1 = healthiest; ties share the average rank
  IEHIComponents components;  // sub-scores in [0, 1]
  IEHIComponents raw;  // signals before scaling
};

struct IEHIReport {
  std::vector<IEHIEntry> entries;  // input order
  IEHIWeights weights;
  std::size_t volatility_window = 12;
};

// Mean over time of the rolling sample standard deviation with window w.
// Requires trajectory.size() >= w >= 2; throws ContractError otherwise.
double smoothed_volatility(std::span<const double> trajectory, std::size_t window);

// Throws RankingError for fewer than two industries and ContractError for
// invalid weights or inputs.
IEHIReport compute_iehi(std::span<const IEHIInputs> inputs, const IEHIWeights& weights = {},
                        std::size_t volatility_window = 12);

// Ranks 1..n by descending score, ties averaged.
std::vector<double> rank_descending(std::span<const double> scores);

// Builds the panel-derived signals over `span` (typically the evaluation
// rows) and attaches the predicted trajectory.
IEHIInputs iehi_inputs_from_panel(const TimeSeriesPanel& panel, RowSpan span, std::vector<double> trajectory,
                                  std::size_t window);

using IndustryValue = std::pair<std::string, double>;

// Spearman correlation between IEHI ranks and per-industry forecast error.
// Throws JoinError listing industries present on only one side.
Correlation validate_ranking(std::span<const IndustryValue> iehi_ranks, std::span<const IndustryValue> error_scores);

}  // namespace laborcast
