#include "predacgan/portfolio/weighting.hpp"

#include "predacgan/common/csv.hpp"
#include "predacgan/common/errors.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

namespace predacgan::portfolio {

void SelectionParams::validate() const {
    if (!(th_p > 0.0 && th_p <= 0.5)) {
        throw ConfigError("Th_p must satisfy 0 < Th_p <= 0.5");
    }
    if (!std::isfinite(th_r)) {
        throw ConfigError("Th_r must be finite");
    }
}

std::string_view to_string(Side s) {
    switch (s) {
        case Side::short_side:
            return "short";
        case Side::long_side:
            return "long";
        case Side::none:
            return "none";
    }
    return "none";
}

double PortfolioWeights::weight_of(const std::string& asset_id) const {
    for (const auto& e : entries) {
        if (e.asset_id == asset_id) {
            return e.weight;
        }
    }
    return 0.0;
}

double PortfolioWeights::net() const {
    double s = 0.0;
    for (const auto& e : entries) {
        s += e.weight;
    }
    return s;
}

double PortfolioWeights::gross() const {
    double s = 0.0;
    for (const auto& e : entries) {
        s += std::abs(e.weight);
    }
    return s;
}

RankBounds rank_bounds(std::size_t n, double th_p) {
    // The slack absorbs representation error in decimal fractions such as
    // 0.1 so that N * Th_p floors the way the decimal value would.
    constexpr double slack = 1e-9;
    const double nd = static_cast<double>(n);
    return RankBounds{static_cast<std::size_t>(std::floor(nd * th_p + slack)),
                      static_cast<std::size_t>(std::floor(nd * (1.0 - th_p) + slack))};
}

PortfolioWeights weight_portfolio(std::span<const predict::AssetPrediction> predictions,
                                  const SelectionParams& params) {
    params.validate();
    const std::size_t n = predictions.size();
    if (n < 2) {
        throw ConfigError("portfolio weighting needs at least two assets");
    }

    PortfolioWeights out;
    out.t = predictions.front().t;
    out.entries.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto& p = predictions[i];
        if (!std::isfinite(p.score) || !std::isfinite(p.risk)) {
            throw DataError("asset " + p.asset_id + " has a non-finite score or risk");
        }
        out.entries[i].asset_id = p.asset_id;
        out.entries[i].score = p.score;
        out.entries[i].risk = p.risk;
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        const auto& ea = out.entries[a];
        const auto& eb = out.entries[b];
        return ea.score != eb.score ? ea.score < eb.score : ea.asset_id < eb.asset_id;
    });

    const auto bounds = rank_bounds(n, params.th_p);
    for (std::size_t k = 1; k <= n; ++k) {
        auto& e = out.entries[order[k - 1]];
        e.rank = k;
        if (k >= bounds.long_first) {
            e.side = Side::long_side;
        } else if (k <= bounds.short_last) {
            e.side = Side::short_side;
        }
        if (e.side == Side::none) {
            continue;
        }
        if (e.risk < params.th_r) {
            (e.side == Side::long_side ? out.n_long : out.n_short) += 1;
        } else {
            e.eliminated = true;
        }
    }

    out.degenerate = out.n_long == 0 || out.n_short == 0;
    if (out.degenerate && !params.allow_one_sided) {
        return out;
    }
    for (auto& e : out.entries) {
        if (e.side == Side::none || e.eliminated) {
            continue;
        }
        e.weight = e.side == Side::long_side ? 1.0 / static_cast<double>(out.n_long)
                                             : -1.0 / static_cast<double>(out.n_short);
    }
    return out;
}

double turnover(const PortfolioWeights& prev, const PortfolioWeights& next) {
    std::map<std::string, double> delta;
    for (const auto& e : prev.entries) {
        delta[e.asset_id] -= e.weight;
    }
    for (const auto& e : next.entries) {
        delta[e.asset_id] += e.weight;
    }
    double total = 0.0;
    for (const auto& [id, d] : delta) {
        total += std::abs(d);
    }
    return 0.5 * total;
}

void write_weights_csv(std::span<const PortfolioWeights> history, const std::filesystem::path& path) {
    auto out = csv::open_output(path);
    out << "rebalance_time,asset_id,weight,side,score,risk_U,eliminated\n";
    for (const auto& w : history) {
        for (const auto& e : w.entries) {
            out << w.t << ',' << e.asset_id << ',' << csv::format_real(e.weight) << ',' << to_string(e.side) << ','
                << csv::format_real(e.score) << ',' << csv::format_real(e.risk) << ','
                << (e.eliminated ? "true" : "false") << '\n';
        }
    }
    if (!out) {
        throw IoError("write failed for " + path.string());
    }
}

}  // namespace predacgan::portfolio
