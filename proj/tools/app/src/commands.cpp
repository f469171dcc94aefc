// SPDX-License-Identifier: Apache-2.0
#include "laborcast_app/commands.hpp"

#include <atomic>
#include <exception>
#include <fstream>
#include <map>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

#include "laborcast/baselines.hpp"
#include "laborcast/csv.hpp"
#include "laborcast/error.hpp"
#include "laborcast/forecasting.hpp"
#include "laborcast/iehi.hpp"
#include "laborcast/reports.hpp"
#include "laborcast/training.hpp"

namespace laborcast::app {
namespace fs = std::filesystem;

namespace {

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw ConfigError("cannot create directory " + dir.string() + ": " + ec.message());
}

std::ofstream open_out(const fs::path& path) {
  ensure_dir(path.parent_path().empty() ? fs::path(".") : path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write " + path.string());
  return out;
}

void echo_config(const RunConfig& config, const fs::path& dir) {
  auto out = open_out(dir / kResolvedConfigName);
  write_config_ini(out, config);
}

WindowSpec window_spec(const LSTNetConfig& m) { return {m.window, m.horizon, m.target_index, 1}; }

bool within(const MonthlyObservation& o, YearMonth first, YearMonth last) {
  const int k = o.year * 12 + static_cast<int>(o.month);
  return k >= first.year * 12 + static_cast<int>(first.month) && k <= last.year * 12 + static_cast<int>(last.month);
}

// Everything evaluate and iehi derive from one trained industry.
struct IndustryEvaluation {
  std::string slug;
  std::string name;
  MetricReport metrics;
  BaselineRow baselines;
  std::vector<PredictionRow> predictions;
  IEHIInputs iehi;
};

IndustryEvaluation evaluate_industry(const RunConfig& config, const std::string& slug) {
  const auto panel = load_panel(config, slug);
  const auto ckpt = load_industry_checkpoint(config, slug);
  const auto split = prepare_dataset(panel, ckpt.window, config.train.val_fraction, config.train.test_fraction);
  if (!(split.train.stats == ckpt.stats)) {
    throw DataError("checkpoint for " + slug +
                    " was trained on different data or split fractions; rerun `laborcast train --industry " + slug +
                    "`");
  }
  const WindowBatch& eval = split.test.empty() ? split.val : split.test;
  if (eval.empty()) throw DataError("no evaluation windows for " + slug + "; lower val_size/test_size or add data");

  IndustryEvaluation r;
  r.slug = slug;
  r.name = panel.industry;
  const auto preds = predict_windows(eval, ckpt.params, ckpt.config);
  std::vector<double> actual, predicted, trajectory;
  for (std::size_t w = 0; w < eval.size(); ++w) {
    const auto& win = eval.windows[w];
    for (std::size_t s = 0; s < preds[w].size(); ++s) {
      actual.push_back(win.targets[s]);
      predicted.push_back(preds[w][s]);
      r.predictions.push_back({win.anchor, win.target_weeks[s], s + 1, win.targets[s], preds[w][s]});
    }
    trajectory.push_back(eval.stats.denormalize_change(preds[w][0]) / win.anchor_level);
  }
  r.metrics = evaluate_metrics(actual, predicted);
  r.baselines = {panel.industry, score(run_baseline(BaselineKind::kOracle, eval)),
                 score(run_baseline(BaselineKind::kPersistence, eval))};
  const RowSpan rows{eval.target_rows(eval.windows.front()).begin, eval.target_rows(eval.windows.back()).end};
  r.iehi = iehi_inputs_from_panel(panel, rows, std::move(trajectory), config.volatility_window);
  r.iehi.industry = panel.industry;
  return r;
}

std::optional<Correlation> rank_validation(const IEHIReport& report, const std::vector<IndustryEvaluation>& evals) {
  if (evals.size() < 3) return std::nullopt;
  std::vector<IndustryValue> ranks, errors;
  for (std::size_t i = 0; i < evals.size(); ++i) {
    ranks.emplace_back(report.entries[i].industry, report.entries[i].rank);
    errors.emplace_back(evals[i].name, evals[i].metrics.smape);
  }
  try {
    return validate_ranking(ranks, errors);
  } catch (const UndefinedCorrelationError&) {
    return std::nullopt;
  }
}

IEHIReport iehi_from(const RunConfig& config, const std::vector<IndustryEvaluation>& evals) {
  std::vector<IEHIInputs> inputs;
  for (const auto& e : evals) inputs.push_back(e.iehi);
  return compute_iehi(inputs, config.iehi_weights, config.volatility_window);
}

std::vector<IndustryEvaluation> evaluate_all(const RunConfig& config) {
  std::vector<IndustryEvaluation> out;
  for (const auto& slug : config.industry_slugs()) out.push_back(evaluate_industry(config, slug));
  return out;
}

void write_iehi_report(const RunConfig& config, const std::vector<IndustryEvaluation>& evals, std::ostream& log) {
  const auto report = iehi_from(config, evals);
  const auto validation = rank_validation(report, evals);
  auto out = open_out(config.report_dir / "iehi.csv");
  write_iehi_csv(out, report, validation);
  for (const auto& e : report.entries) {
    log << "  " << e.industry << ": IEHI " << format_fixed(e.score, 3) << " rank " << format_number(e.rank) << '\n';
  }
  if (validation) {
    log << "IEHI rank vs SMAPE: rho=" << format_fixed(validation->rho, 4)
        << " p=" << format_number(validation->p_value) << '\n';
  }
}

}  // namespace

fs::path panel_path(const RunConfig& config, const std::string& slug) { return config.panel_dir / (slug + ".csv"); }

fs::path checkpoint_path(const RunConfig& config, const std::string& slug) {
  return config.checkpoint_dir / (slug + ".ckpt");
}

TimeSeriesPanel load_panel(const RunConfig& config, const std::string& slug) {
  const auto path = panel_path(config, slug);
  std::ifstream in(path);
  if (!in) throw DataError("panel " + path.string() + " not found; run `laborcast fetch` first");
  auto panels = read_panel_csv(in);
  if (panels.size() != 1) throw ParseError(path.string() + ": expected exactly one industry");
  audit_panel(panels.front());
  return std::move(panels.front());
}

Checkpoint load_industry_checkpoint(const RunConfig& config, const std::string& slug) {
  const auto path = checkpoint_path(config, slug);
  if (!fs::exists(path)) {
    throw DataError("checkpoint " + path.string() + " not found; run `laborcast train --industry " + slug + "`");
  }
  return load_checkpoint(path);
}

void cmd_fetch(const RunConfig& config, const std::optional<std::string>& api_key, std::ostream& log) {
  if (!config.offline && (!api_key || api_key->empty())) {
    throw ConfigError(std::string(kApiKeyEnv) + " is not set; export it or pass --offline to use fixtures");
  }
  const auto slugs = config.industry_slugs();
  std::vector<SeriesRequest> requests;
  for (const auto& slug : slugs) {
    for (auto id : find_industry(slug).series_ids) {
      requests.push_back({std::string(id), config.first.year, config.last.year, api_key.value_or("")});
    }
  }
  std::function<std::unique_ptr<SeriesSource>()> factory;
  std::chrono::milliseconds interval{0};
  if (config.offline) {
    factory = [dir = config.fixture_dir] { return std::make_unique<FixtureSource>(dir); };
  } else {
    BlsClientOptions opts;
    opts.base_url = config.api_base_url;
    factory = [opts] { return std::make_unique<BlsClient>(opts); };
    interval = std::chrono::milliseconds(200);
  }
  const auto results = fetch_many(factory, requests, config.max_parallel_fetches, interval);

  ensure_dir(config.panel_dir);
  std::vector<TimeSeriesPanel> panels;
  for (std::size_t i = 0; i < slugs.size(); ++i) {
    const auto& info = find_industry(slugs[i]);
    std::array<std::vector<MonthlyObservation>, kIndicatorCount> series;
    for (std::size_t k = 0; k < kIndicatorCount; ++k) {
      for (const auto& o : results[i * kIndicatorCount + k])
        if (within(o, config.first, config.last)) series[k].push_back(o);
    }
    auto panel = repair_missing(assemble_panel(std::string(info.name), series, config.first, config.last));
    audit_panel(panel);
    auto out = open_out(panel_path(config, slugs[i]));
    write_panel_csv(out, std::span(&panel, 1));
    log << slugs[i] << ": " << panel.size() << " weeks, " << panel.interpolated_cells() << " interpolated cells\n";
    panels.push_back(std::move(panel));
  }
  auto combined = open_out(config.panel_dir / "panels.csv");
  write_panel_csv(combined, panels);
  echo_config(config, config.panel_dir);
}

void cmd_prepare(const RunConfig& config, std::ostream& log) {
  auto out = open_out(config.report_dir / "splits.csv");
  out << "industry,rows,windows,train,val,test,purged\n";
  for (const auto& slug : config.industry_slugs()) {
    const auto panel = load_panel(config, slug);
    const auto split = prepare_dataset(panel, window_spec(config.model), config.train.val_fraction,
                                       config.train.test_fraction);
    const auto total = split.train.size() + split.val.size() + split.test.size() + split.purged;
    out << slug << ',' << panel.size() << ',' << total << ',' << split.train.size() << ',' << split.val.size() << ','
        << split.test.size() << ',' << split.purged << '\n';
    log << slug << ": " << panel.size() << " weeks, windows train/val/test " << split.train.size() << '/'
        << split.val.size() << '/' << split.test.size() << " (" << split.purged << " purged)\n";
  }
  echo_config(config, config.report_dir);
}

void cmd_train(const RunConfig& config, std::size_t jobs, std::ostream& log) {
  const auto slugs = config.industry_slugs();
  ensure_dir(config.checkpoint_dir);
  struct Outcome {
    std::string summary;
    std::exception_ptr error;
  };
  std::vector<Outcome> outcomes(slugs.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < slugs.size(); i = next++) {
      try {
        const auto& slug = slugs[i];
        const auto panel = load_panel(config, slug);
        const auto spec = window_spec(config.model);
        const auto split = prepare_dataset(panel, spec, config.train.val_fraction, config.train.test_fraction);
        std::size_t clip_notices = 0;
        auto result = train(config.model, init_params(config.model, config.train.seed), split.train, split.val,
                            config.train, [&](std::string_view) { ++clip_notices; });
        Checkpoint ckpt{panel.industry, config.train.seed, result.log.best_epoch, config.model, spec,
                        split.train.stats, std::move(result.params)};
        save_checkpoint(checkpoint_path(config, slug), ckpt);
        auto log_out = open_out(config.checkpoint_dir / (slug + "_trainlog.csv"));
        write_train_log_csv(log_out, result.log);
        std::ostringstream s;
        s << slug << ": " << result.log.epochs.size() << " epochs, best epoch " << result.log.best_epoch;
        if (!result.log.epochs.empty()) {
          const auto& best = result.log.epochs[result.log.best_epoch - 1];
          s << ", train loss " << format_fixed(best.train_loss, 4) << ", val loss " << format_fixed(best.val_loss, 4);
        }
        if (clip_notices > 0) s << ", gradient clipped in " << clip_notices << " epochs";
        outcomes[i].summary = s.str();
      } catch (...) {
        outcomes[i].error = std::current_exception();
      }
    }
  };
  const std::size_t n_threads = std::max<std::size_t>(1, std::min(jobs, slugs.size()));
  std::vector<std::thread> threads;
  for (std::size_t t = 1; t < n_threads; ++t) threads.emplace_back(worker);
  worker();
  for (auto& t : threads) t.join();
  for (const auto& o : outcomes)
    if (!o.error) log << o.summary << '\n';
  for (const auto& o : outcomes)
    if (o.error) std::rethrow_exception(o.error);
  echo_config(config, config.checkpoint_dir);
}

void cmd_evaluate(const RunConfig& config, bool diagnostic, std::ostream& log) {
  const auto evals = evaluate_all(config);
  std::vector<IndustryMetrics> metrics;
  std::vector<BaselineRow> baseline_rows;
  for (const auto& e : evals) {
    metrics.push_back({e.name, e.metrics});
    baseline_rows.push_back(e.baselines);
    auto out = open_out(config.report_dir / "predictions" / (e.slug + ".csv"));
    write_predictions_csv(out, e.predictions);
    log << e.slug << ": SMAPE " << format_fixed(e.metrics.smape, 2) << " MSE " << format_fixed(e.metrics.mse, 4)
        << " MAE " << format_fixed(e.metrics.mae, 4) << " (persistence SMAPE "
        << format_fixed(e.baselines.persistence.smape, 2) << ")\n";
  }
  {
    auto out = open_out(config.report_dir / "metrics.csv");
    write_metric_table_csv(out, metrics, diagnostic);
  }
  {
    auto out = open_out(config.report_dir / "baselines.csv");
    write_baseline_table_csv(out, make_baseline_table(std::move(baseline_rows)));
  }
  if (evals.size() >= 2) write_iehi_report(config, evals, log);
  echo_config(config, config.report_dir);
}

void cmd_baselines(const RunConfig& config, std::ostream& log) {
  std::vector<TimeSeriesPanel> panels;
  for (const auto& slug : config.industry_slugs()) panels.push_back(load_panel(config, slug));
  const auto table =
      run_baseline_suite(panels, window_spec(config.model), config.train.val_fraction, config.train.test_fraction);
  auto out = open_out(config.report_dir / "baselines.csv");
  write_baseline_table_csv(out, table);
  for (const auto& r : table.rows) {
    log << r.industry << ": oracle RMSE " << format_fixed(r.oracle.rmse, 3) << " SMAPE "
        << format_fixed(r.oracle.smape, 2) << ", persistence RMSE " << format_fixed(r.persistence.rmse, 3)
        << " SMAPE " << format_fixed(r.persistence.smape, 2) << '\n';
  }
  echo_config(config, config.report_dir);
}

void cmd_forecast(const RunConfig& config, std::ostream& log) {
  for (const auto& slug : config.industry_slugs()) {
    const auto panel = load_panel(config, slug);
    const auto ckpt = load_industry_checkpoint(config, slug);
    auto fc = forecast_change(panel, ckpt.params, ckpt.config, ckpt.stats);
    auto out = open_out(config.report_dir / "forecasts" / (slug + ".csv"));
    write_forecast_csv(out, fc);
    log << slug << ": forecast from " << format_date(fc.anchor) << ", " << fc.weeks.size()
        << " steps, final level " << format_fixed(fc.levels.back(), 1) << '\n';
  }
  echo_config(config, config.report_dir);
}

void cmd_iehi(const RunConfig& config, const std::optional<fs::path>& validation_fixture, std::ostream& log) {
  if (validation_fixture) {
    std::ifstream in(*validation_fixture);
    if (!in) throw DataError("cannot open ranking fixture " + validation_fixture->string());
    const auto rows = read_ranked_errors_csv(in);
    std::vector<IndustryValue> ranks, errors;
    for (const auto& r : rows) {
      ranks.emplace_back(r.industry, r.iehi_rank);
      errors.emplace_back(r.industry, r.smape);
    }
    const auto c = validate_ranking(ranks, errors);
    auto out = open_out(config.report_dir / "iehi_validation.csv");
    out << "# " << kIehiSchema << "\nindustry,smape,iehi_rank\n";
    for (const auto& r : rows) out << r.industry << ',' << format_number(r.smape) << ',' << format_number(r.iehi_rank) << '\n';
    out << "# spearman_rho=" << format_number(c.rho) << "\n# p_value=" << format_number(c.p_value) << '\n';
    log << "Spearman rho=" << format_fixed(c.rho, 4) << " p=" << format_number(c.p_value) << " over " << rows.size()
        << " industries\n";
    echo_config(config, config.report_dir);
    return;
  }
  const auto evals = evaluate_all(config);
  write_iehi_report(config, evals, log);
  echo_config(config, config.report_dir);
}

}  // namespace laborcast::app
