#pragma once

#include "predacgan/data/prices.hpp"
#include "predacgan/predict/ensemble.hpp"

#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace predacgan::portfolio {

struct SelectionParams {
    double th_p = 0.1;  // fraction of the universe per side, 0 < th_p <= 0.5
    double th_r = 0.0;  // a candidate survives iff its risk U < th_r
    // Keep the surviving side when the other side is empty instead of
    // zeroing the book. Breaks market neutrality; off by default.
    bool allow_one_sided = false;

    void validate() const;
};

enum class Side { none, short_side, long_side };
std::string_view to_string(Side s);

struct WeightEntry {
    std::string asset_id;
    double weight = 0.0;
    Side side = Side::none;  // candidate side, whether or not it survived
    double score = 0.0;
    double risk = 0.0;
    std::size_t rank = 0;    // 1-based ascending score rank
    bool eliminated = false; // candidate that failed the risk test
};

struct PortfolioWeights {
    data::TimeIndex t = 0;
    std::vector<WeightEntry> entries;  // input order
    std::size_t n_long = 0;
    std::size_t n_short = 0;
    bool degenerate = false;  // a side had no survivors

    double weight_of(const std::string& asset_id) const;
    double net() const;
    double gross() const;
};

// 1-based rank ranges: shorts are ranks 1..short_last, longs are
// long_first..N, with short_last = floor(N th_p) and
// long_first = floor(N (1 - th_p)).
struct RankBounds {
    std::size_t short_last = 0;
    std::size_t long_first = 0;
};
RankBounds rank_bounds(std::size_t n, double th_p);

// Score-ranked market-neutral selection with risk elimination. Assets are
// sorted ascending by score (ties by asset_id). A rank inside both ranges
// (possible only when th_p = 0.5) is a long candidate only. Survivors share
// -1 (short) or +1 (long) equally; an empty side zeroes the whole book and
// raises `degenerate` unless allow_one_sided is set.
PortfolioWeights weight_portfolio(std::span<const predict::AssetPrediction> predictions,
                                  const SelectionParams& params);

// 0.5 * sum |w_next - w_prev| over the union of assets.
double turnover(const PortfolioWeights& prev, const PortfolioWeights& next);

// rebalance_time,asset_id,weight,side,score,risk_U,eliminated
void write_weights_csv(std::span<const PortfolioWeights> history, const std::filesystem::path& path);

}  // namespace predacgan::portfolio
