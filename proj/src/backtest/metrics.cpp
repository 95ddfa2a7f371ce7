#include "predacgan/backtest/metrics.hpp"

#include "predacgan/common/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace predacgan::backtest {

namespace {

struct Moments {
    double mean = 0.0;
    double std = 0.0;
};

Moments sample_moments(std::span<const double> x) {
    const double n = static_cast<double>(x.size());
    Moments m;
    m.mean = std::accumulate(x.begin(), x.end(), 0.0) / n;
    double ss = 0.0;
    for (double v : x) {
        ss += (v - m.mean) * (v - m.mean);
    }
    m.std = std::sqrt(ss / (n - 1.0));
    return m;
}

std::optional<double> mean_over_std(std::span<const double> x) {
    if (x.size() < 2) {
        return std::nullopt;
    }
    const auto [lo, hi] = std::minmax_element(x.begin(), x.end());
    if (*lo == *hi) {
        return std::nullopt;
    }
    const auto m = sample_moments(x);
    const double scale = std::max(1.0, std::max(std::abs(*lo), std::abs(*hi)));
    if (!(m.std > 1e-14 * scale)) {
        return std::nullopt;
    }
    return m.mean / m.std;
}

}  // namespace

std::vector<double> equity_curve(std::span<const double> returns) {
    std::vector<double> curve;
    curve.reserve(returns.size() + 1);
    curve.push_back(1.0);
    for (double r : returns) {
        curve.push_back(curve.back() * (1.0 + r));
    }
    return curve;
}

double max_drawdown(std::span<const double> equity) {
    if (equity.empty()) {
        throw DataError("max_drawdown of an empty curve");
    }
    double peak = equity.front();
    double worst = 0.0;
    for (double e : equity) {
        peak = std::max(peak, e);
        worst = std::min(worst, (e - peak) / peak);
    }
    return worst;
}

std::optional<double> sharpe(std::span<const double> returns, double annualization) {
    const auto ratio = mean_over_std(returns);
    if (!ratio) {
        return std::nullopt;
    }
    return *ratio * std::sqrt(annualization);
}

std::optional<double> information_ratio(std::span<const double> returns, std::span<const double> benchmark) {
    if (returns.size() != benchmark.size()) {
        throw DataError("information_ratio: series are not aligned");
    }
    std::vector<double> active(returns.size());
    for (std::size_t i = 0; i < returns.size(); ++i) {
        active[i] = returns[i] - benchmark[i];
    }
    return mean_over_std(active);
}

YearlyReturns aggregate_yearly(std::span<const double> period_returns, std::size_t periods_per_year) {
    if (periods_per_year == 0) {
        throw DataError("periods_per_year must be positive");
    }
    YearlyReturns out;
    const std::size_t full = period_returns.size() / periods_per_year;
    for (std::size_t y = 0; y < full; ++y) {
        double growth = 1.0;
        for (std::size_t k = 0; k < periods_per_year; ++k) {
            growth *= 1.0 + period_returns[y * periods_per_year + k];
        }
        out.full_years.push_back(growth - 1.0);
    }
    out.trailing_periods = period_returns.size() - full * periods_per_year;
    if (out.trailing_periods > 0) {
        double growth = 1.0;
        for (std::size_t k = full * periods_per_year; k < period_returns.size(); ++k) {
            growth *= 1.0 + period_returns[k];
        }
        out.trailing = growth - 1.0;
    }
    return out;
}

MetricSet compute_metrics(std::span<const double> returns, std::span<const double> benchmark) {
    MetricSet m;
    m.mmd = max_drawdown(equity_curve(returns));
    m.ir = information_ratio(returns, benchmark);
    m.sharpe_monthly = sharpe(returns, 1.0);
    m.sharpe_yearly = sharpe(returns, kPeriodsPerYear);
    if (!returns.empty()) {
        m.ret_monthly = std::accumulate(returns.begin(), returns.end(), 0.0) / static_cast<double>(returns.size());
    }
    const auto yearly = aggregate_yearly(returns);
    if (!yearly.full_years.empty()) {
        m.ret_yearly = std::accumulate(yearly.full_years.begin(), yearly.full_years.end(), 0.0) /
                       static_cast<double>(yearly.full_years.size());
    }
    return m;
}

}  // namespace predacgan::backtest
