#pragma once

#include "predacgan/backtest/engine.hpp"

#include <json.hpp>

#include <filesystem>
#include <span>

namespace predacgan::backtest {

// Undefined metrics are written as the string "undefined".
nlohmann::json to_json(const MetricSet& metrics);
nlohmann::json to_json(const BacktestConfig& config);

// Metrics, yearly breakdown, config echo and the conventions used to compute
// them.
nlohmann::json metrics_document(const BacktestReport& report, const BacktestConfig& config);

void write_metrics_json(const BacktestReport& report, const BacktestConfig& config,
                        const std::filesystem::path& path);

// time,equity,period_return. The first row is the starting equity at the
// first rebalance with an empty return; each later row is stamped with the
// period's realization time t + T_o.
void write_equity_csv(const BacktestReport& report, const std::filesystem::path& path);

// th_p,th_r,mmd,ir,sharpe_monthly,sharpe_yearly,ret_monthly,ret_yearly,degenerate_periods
void write_comparison_csv(std::span<const GridEntry> grid, const std::filesystem::path& path);

// Writes metrics.json, equity.csv and weights.csv into `dir`.
void write_report_bundle(const BacktestReport& report, const BacktestConfig& config,
                         const std::filesystem::path& dir);

}  // namespace predacgan::backtest
