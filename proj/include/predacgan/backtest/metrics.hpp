#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace predacgan::backtest {

// Cumulative product of (1 + r), starting at 1.0; length returns.size() + 1.
std::vector<double> equity_curve(std::span<const double> returns);

// min over tau <= tau' of (equity[tau'] - equity[tau]) / equity[tau]; <= 0.
double max_drawdown(std::span<const double> equity);

// mean / sample std * sqrt(annualization), risk-free rate 0. nullopt when
// fewer than two periods or the returns have no spread.
std::optional<double> sharpe(std::span<const double> returns, double annualization = 1.0);

// Sharpe of the active return (portfolio - benchmark), no annualization.
std::optional<double> information_ratio(std::span<const double> returns, std::span<const double> benchmark);

struct YearlyReturns {
    std::vector<double> full_years;  // prod(1 + r) - 1 per 12-period block
    std::size_t trailing_periods = 0;
    std::optional<double> trailing;  // partial last block, excluded from stats
};

YearlyReturns aggregate_yearly(std::span<const double> period_returns, std::size_t periods_per_year = 12);

inline constexpr double kPeriodsPerYear = 12.0;

struct MetricSet {
    double mmd = 0.0;
    std::optional<double> ir;
    std::optional<double> sharpe_monthly;
    std::optional<double> sharpe_yearly;  // sharpe_monthly * sqrt(12)
    double ret_monthly = 0.0;             // mean simple period return
    std::optional<double> ret_yearly;     // mean compounded full-year return
};

MetricSet compute_metrics(std::span<const double> returns, std::span<const double> benchmark);

}  // namespace predacgan::backtest
