#include "predacgan/backtest/engine.hpp"

#include "predacgan/common/errors.hpp"
#include "predacgan/data/features.hpp"

#include <unordered_map>

namespace predacgan::backtest {

std::string_view to_string(Benchmark b) {
    return b == Benchmark::zero ? "zero" : "equal_weight";
}

Benchmark benchmark_from_string(std::string_view text) {
    if (text == "equal_weight") return Benchmark::equal_weight;
    if (text == "zero") return Benchmark::zero;
    throw ConfigError("unknown benchmark '" + std::string(text) + "'");
}

void BacktestConfig::validate(const data::Universe& universe) const {
    if (!(train_end < eval_start)) {
        throw ConfigError("train_end must precede eval_start");
    }
    if (eval_start > eval_end) {
        throw ConfigError("evaluation window is empty (eval_start > eval_end)");
    }
    if (rebalance_stride < 1) {
        throw ConfigError("rebalance stride must be >= 1");
    }
    if (samples < 1 || input_window < 1 || horizon < 1) {
        throw ConfigError("I, T_i and T_o must be positive");
    }
    selection.validate();
    const auto [lo, hi] = data::date_range(universe);
    if (universe.empty() || hi < lo) {
        throw ConfigError("universe has no observations");
    }
    if (eval_start > hi || eval_start + static_cast<TimeIndex>(horizon) > hi) {
        throw ConfigError("evaluation window starts after the last realizable date");
    }
    if (eval_end + static_cast<TimeIndex>(horizon) > hi) {
        throw ConfigError("eval_end + T_o runs past the last date in the universe");
    }
}

std::vector<TimeIndex> rebalance_times(const BacktestConfig& config) {
    std::vector<TimeIndex> times;
    for (TimeIndex t = config.eval_start; t <= config.eval_end; t += config.rebalance_stride) {
        times.push_back(t);
    }
    return times;
}

std::vector<RebalancePredictions> predict_rebalances(const gan::GeneratorNet& g, const data::Universe& universe,
                                                     const BacktestConfig& config) {
    config.validate(universe);
    if (g.condition_dim() != config.input_window) {
        throw ConfigError("generator condition width " + std::to_string(g.condition_dim()) +
                          " differs from T_i = " + std::to_string(config.input_window));
    }
    std::vector<RebalancePredictions> out;
    for (const TimeIndex t : rebalance_times(config)) {
        std::vector<predict::Condition> conditions;
        for (const auto& series : universe) {
            if (!data::has_feature_window(series, t, config.input_window)) {
                continue;
            }
            conditions.push_back({series.asset_id, t, data::build_features(series, t, config.input_window).values});
        }
        out.push_back({t, predict::predict_universe(g, conditions, config.samples, config.rng_seed, config.threads)});
    }
    return out;
}

std::vector<double> BacktestReport::period_returns() const {
    std::vector<double> r;
    for (const auto& p : periods) {
        r.push_back(p.portfolio_return);
    }
    return r;
}

std::vector<double> BacktestReport::benchmark_returns() const {
    std::vector<double> r;
    for (const auto& p : periods) {
        r.push_back(p.benchmark_return);
    }
    return r;
}

BacktestReport realize(std::span<const portfolio::PortfolioWeights> weights, const data::Universe& universe,
                       const BacktestConfig& config) {
    if (weights.empty()) {
        throw ConfigError("no rebalance periods to realize");
    }
    std::unordered_map<std::string, const data::PriceSeries*> by_id;
    for (const auto& s : universe) {
        by_id.emplace(s.asset_id, &s);
    }
    auto forward_return = [&](const std::string& asset, TimeIndex t) -> std::optional<double> {
        const auto it = by_id.find(asset);
        if (it == by_id.end()) {
            return std::nullopt;
        }
        const auto start = it->second->close_at(t);
        const auto end = it->second->last_close_at_or_before(t + static_cast<TimeIndex>(config.horizon));
        if (!start || !end) {
            return std::nullopt;
        }
        return (*end - *start) / *start;
    };

    BacktestReport report;
    for (const auto& w : weights) {
        PeriodResult period;
        period.t = w.t;
        period.t_end = w.t + static_cast<TimeIndex>(config.horizon);
        period.n_long = w.n_long;
        period.n_short = w.n_short;
        period.degenerate = w.degenerate;
        double bench_sum = 0.0;
        std::size_t bench_count = 0;
        for (const auto& e : w.entries) {
            const auto r = forward_return(e.asset_id, w.t);
            if (!r) {
                if (e.weight != 0.0) {
                    throw DataError("asset " + e.asset_id + " holds weight at t=" + std::to_string(w.t) +
                                    " but has no close at t");
                }
                continue;
            }
            period.portfolio_return += e.weight * *r;
            bench_sum += *r;
            ++bench_count;
        }
        if (config.benchmark == Benchmark::equal_weight && bench_count > 0) {
            period.benchmark_return = bench_sum / static_cast<double>(bench_count);
        }
        report.degenerate_periods += w.degenerate ? 1 : 0;
        report.periods.push_back(period);
    }
    report.weights.assign(weights.begin(), weights.end());
    const auto returns = report.period_returns();
    const auto bench = report.benchmark_returns();
    report.equity_curve = equity_curve(returns);
    report.metrics = compute_metrics(returns, bench);
    report.yearly = aggregate_yearly(returns);
    return report;
}

BacktestReport evaluate_selection(std::span<const RebalancePredictions> predictions,
                                  const data::Universe& universe, const BacktestConfig& config,
                                  const portfolio::SelectionParams& selection) {
    selection.validate();
    std::vector<portfolio::PortfolioWeights> history;
    history.reserve(predictions.size());
    for (const auto& rb : predictions) {
        if (rb.predictions.size() < 2) {
            portfolio::PortfolioWeights empty;
            empty.t = rb.t;
            empty.degenerate = true;
            for (const auto& p : rb.predictions) {
                empty.entries.push_back({p.asset_id, 0.0, portfolio::Side::none, p.score, p.risk, 1, false});
            }
            history.push_back(std::move(empty));
            continue;
        }
        history.push_back(portfolio::weight_portfolio(rb.predictions, selection));
        history.back().t = rb.t;
    }
    auto report = realize(history, universe, config);
    report.selection = selection;
    return report;
}

BacktestReport run_backtest(const gan::GeneratorNet& g, const data::Universe& universe,
                            const BacktestConfig& config) {
    const auto predictions = predict_rebalances(g, universe, config);
    return evaluate_selection(predictions, universe, config, config.selection);
}

std::vector<GridEntry> threshold_grid(std::span<const RebalancePredictions> predictions,
                                      const data::Universe& universe, const BacktestConfig& config,
                                      std::span<const double> th_p_values, std::span<const double> th_r_values) {
    std::vector<GridEntry> grid;
    for (const double th_p : th_p_values) {
        for (const double th_r : th_r_values) {
            auto selection = config.selection;
            selection.th_p = th_p;
            selection.th_r = th_r;
            const auto report = evaluate_selection(predictions, universe, config, selection);
            grid.push_back({th_p, th_r, report.metrics, report.degenerate_periods});
        }
    }
    return grid;
}

}  // namespace predacgan::backtest
