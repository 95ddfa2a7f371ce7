#include "predacgan/backtest/report.hpp"

#include "predacgan/common/csv.hpp"
#include "predacgan/common/errors.hpp"

#include <cmath>

namespace predacgan::backtest {

namespace {

nlohmann::json optional_value(const std::optional<double>& v) {
    if (v && std::isfinite(*v)) {
        return *v;
    }
    return "undefined";
}

std::string optional_text(const std::optional<double>& v) {
    return v ? csv::format_real(*v) : std::string("undefined");
}

}  // namespace

nlohmann::json to_json(const MetricSet& m) {
    return {
        {"mmd", m.mmd},
        {"ir", optional_value(m.ir)},
        {"sharpe_monthly", optional_value(m.sharpe_monthly)},
        {"sharpe_yearly", optional_value(m.sharpe_yearly)},
        {"ret_monthly", m.ret_monthly},
        {"ret_yearly", optional_value(m.ret_yearly)},
    };
}

nlohmann::json to_json(const BacktestConfig& c) {
    return {
        {"train_end", c.train_end},
        {"eval_start", c.eval_start},
        {"eval_end", c.eval_end},
        {"rebalance_stride", c.rebalance_stride},
        {"th_p", c.selection.th_p},
        {"th_r", c.selection.th_r},
        {"allow_one_sided", c.selection.allow_one_sided},
        {"samples", c.samples},
        {"input_window", c.input_window},
        {"horizon", c.horizon},
        {"seed", c.rng_seed},
        {"benchmark", std::string(to_string(c.benchmark))},
    };
}

nlohmann::json metrics_document(const BacktestReport& report, const BacktestConfig& config) {
    nlohmann::json yearly = nlohmann::json::array();
    for (const double y : report.yearly.full_years) {
        yearly.push_back(y);
    }
    auto cfg = to_json(config);
    cfg["th_p"] = report.selection.th_p;
    cfg["th_r"] = report.selection.th_r;
    cfg["allow_one_sided"] = report.selection.allow_one_sided;
    return {
        {"metrics", to_json(report.metrics)},
        {"periods", report.periods.size()},
        {"degenerate_periods", report.degenerate_periods},
        {"yearly_returns", yearly},
        {"trailing_periods_excluded", report.yearly.trailing_periods},
        {"config", cfg},
        {"conventions",
         {
             {"periods_per_year", static_cast<int>(kPeriodsPerYear)},
             {"sharpe_yearly", "sharpe_monthly * sqrt(12)"},
             {"risk_free_rate", 0.0},
             {"benchmark", std::string(to_string(config.benchmark))},
             {"equity", "compounded (1 + r)"},
             {"ret_yearly", "mean of compounded full 12-period blocks"},
             {"std", "sample (n - 1)"},
         }},
    };
}

void write_metrics_json(const BacktestReport& report, const BacktestConfig& config,
                        const std::filesystem::path& path) {
    auto out = csv::open_output(path);
    out << metrics_document(report, config).dump(2) << '\n';
    if (!out) throw IoError("failed writing " + path.string());
}

void write_equity_csv(const BacktestReport& report, const std::filesystem::path& path) {
    auto out = csv::open_output(path);
    out << "time,equity,period_return\n";
    if (!report.periods.empty()) {
        out << report.periods.front().t << ',' << csv::format_real(report.equity_curve.front()) << ",\n";
    }
    for (std::size_t k = 0; k < report.periods.size(); ++k) {
        out << report.periods[k].t_end << ',' << csv::format_real(report.equity_curve[k + 1]) << ','
            << csv::format_real(report.periods[k].portfolio_return) << '\n';
    }
    if (!out) throw IoError("failed writing " + path.string());
}

void write_comparison_csv(std::span<const GridEntry> grid, const std::filesystem::path& path) {
    auto out = csv::open_output(path);
    out << "th_p,th_r,mmd,ir,sharpe_monthly,sharpe_yearly,ret_monthly,ret_yearly,degenerate_periods\n";
    for (const auto& g : grid) {
        out << csv::format_real(g.th_p) << ',' << csv::format_real(g.th_r) << ',' << csv::format_real(g.metrics.mmd)
            << ',' << optional_text(g.metrics.ir) << ',' << optional_text(g.metrics.sharpe_monthly) << ','
            << optional_text(g.metrics.sharpe_yearly) << ',' << csv::format_real(g.metrics.ret_monthly) << ','
            << optional_text(g.metrics.ret_yearly) << ',' << g.degenerate_periods << '\n';
    }
    if (!out) throw IoError("failed writing " + path.string());
}

void write_report_bundle(const BacktestReport& report, const BacktestConfig& config,
                         const std::filesystem::path& dir) {
    write_metrics_json(report, config, dir / "metrics.json");
    write_equity_csv(report, dir / "equity.csv");
    portfolio::write_weights_csv(report.weights, dir / "weights.csv");
}

}  // namespace predacgan::backtest
