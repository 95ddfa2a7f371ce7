#pragma once

#include "predacgan/backtest/metrics.hpp"
#include "predacgan/data/prices.hpp"
#include "predacgan/gan/model.hpp"
#include "predacgan/portfolio/weighting.hpp"
#include "predacgan/predict/ensemble.hpp"

#include <span>
#include <string_view>
#include <vector>

namespace predacgan::backtest {

using data::TimeIndex;

enum class Benchmark { equal_weight, zero };
std::string_view to_string(Benchmark b);
Benchmark benchmark_from_string(std::string_view text);

struct BacktestConfig {
    TimeIndex train_end = 0;
    TimeIndex eval_start = 1;
    TimeIndex eval_end = 1;
    TimeIndex rebalance_stride = 21;
    portfolio::SelectionParams selection;
    std::size_t samples = predict::kReferenceSampleCount;  // I
    std::size_t input_window = 200;                        // T_i
    std::size_t horizon = 21;                              // T_o
    std::uint64_t rng_seed = 0;
    Benchmark benchmark = Benchmark::equal_weight;
    std::size_t threads = 1;

    // Checks ordering, stride and that every rebalance can be realized
    // within the universe's date range. ConfigError otherwise.
    void validate(const data::Universe& universe) const;
};

std::vector<TimeIndex> rebalance_times(const BacktestConfig& config);

// Predictions for every asset with a full feature window at t. Only prices
// at or before t are read.
struct RebalancePredictions {
    TimeIndex t = 0;
    std::vector<predict::AssetPrediction> predictions;
};

// The single prediction pass shared by every selection setting.
std::vector<RebalancePredictions> predict_rebalances(const gan::GeneratorNet& g, const data::Universe& universe,
                                                     const BacktestConfig& config);

struct PeriodResult {
    TimeIndex t = 0;
    TimeIndex t_end = 0;  // t + T_o
    double portfolio_return = 0.0;
    double benchmark_return = 0.0;
    std::size_t n_long = 0;
    std::size_t n_short = 0;
    bool degenerate = false;
};

struct BacktestReport {
    std::vector<PeriodResult> periods;
    std::vector<double> equity_curve;  // equity_curve[0] == 1.0
    std::vector<portfolio::PortfolioWeights> weights;
    MetricSet metrics;
    YearlyReturns yearly;
    std::size_t degenerate_periods = 0;
    portfolio::SelectionParams selection;

    std::vector<double> period_returns() const;
    std::vector<double> benchmark_returns() const;
};

// Realizes a given weight history: each asset's return runs from t to
// t + T_o, marked at the last available close when t + T_o is missing.
BacktestReport realize(std::span<const portfolio::PortfolioWeights> weights, const data::Universe& universe,
                       const BacktestConfig& config);

// Weights every rebalance with the given selection and realizes it.
BacktestReport evaluate_selection(std::span<const RebalancePredictions> predictions,
                                  const data::Universe& universe, const BacktestConfig& config,
                                  const portfolio::SelectionParams& selection);

BacktestReport run_backtest(const gan::GeneratorNet& g, const data::Universe& universe,
                            const BacktestConfig& config);

struct GridEntry {
    double th_p = 0.0;
    double th_r = 0.0;
    MetricSet metrics;
    std::size_t degenerate_periods = 0;
};

// Every (th_p, th_r) combination evaluated over one shared prediction set.
std::vector<GridEntry> threshold_grid(std::span<const RebalancePredictions> predictions,
                                      const data::Universe& universe, const BacktestConfig& config,
                                      std::span<const double> th_p_values, std::span<const double> th_r_values);

}  // namespace predacgan::backtest
