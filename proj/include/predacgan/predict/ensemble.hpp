#pragma once

#include "predacgan/common/random.hpp"
#include "predacgan/data/features.hpp"
#include "predacgan/gan/model.hpp"

#include <array>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace predacgan::predict {

using gan::Matrix;

// Probabilities are clamped to [eps, 1 - eps] before the log-odds in the
// risk measure.
inline constexpr double kProbabilityClamp = 1e-7;

// Sample count at which the published risk thresholds are calibrated; the
// risk measure grows linearly with the sample count.
inline constexpr std::size_t kReferenceSampleCount = 101;

struct ConditionId {
    std::string asset_id;
    data::TimeIndex t = 0;
};

// I generator outputs for one condition, one probability row per noise draw.
struct PredictionEnsemble {
    Matrix samples;  // I x 3
    ConditionId condition;

    std::size_t size() const noexcept { return static_cast<std::size_t>(samples.rows()); }
};

struct AssetPrediction {
    std::string asset_id;
    data::TimeIndex t = 0;
    std::array<double, 3> mean_probs{};
    std::array<double, 3> median_probs{};  // per-category median, renormalized
    data::Category modal = data::Category::zero;  // c_m
    double score = 0.0;  // mean P(c_plus) - mean P(c_minus)
    double risk = 0.0;   // U, <= 0; more negative means more confident
    std::size_t samples = 0;
};

PredictionEnsemble ensemble_predict(const gan::GeneratorNet& g, std::span<const double> x, std::size_t samples,
                                    Rng& rng, ConditionId condition = {});

// Argmax of the per-category sums, accumulated in sample order; ties
// resolve to the earlier category in the order minus, zero, plus.
data::Category modal_category(const PredictionEnsemble& ensemble);

// U = -sum_i [p_i log(p_i / (1 - p_i)) + (1 - p_i) log((1 - p_i) / p_i)],
// p_i = clamp(P_i(c_m)), natural log, summed (not averaged) over samples.
// Each summand is evaluated as (2 p_i - 1) log(p_i / (1 - p_i)), which is
// algebraically identical and never rounds above zero.
double risk_measure(const PredictionEnsemble& ensemble, data::Category modal, double clamp = kProbabilityClamp);

AssetPrediction aggregate(const PredictionEnsemble& ensemble);

struct Condition {
    std::string asset_id;
    data::TimeIndex t = 0;
    std::vector<double> x;
};

// Noise stream for one (asset, time): a function of the master seed and the
// condition's identity only, never of its position in a batch.
std::uint64_t condition_seed(std::uint64_t master_seed, const std::string& asset_id, data::TimeIndex t);

// One prediction per condition, in input order. Errors are rethrown with the
// asset id prefixed.
std::vector<AssetPrediction> predict_universe(const gan::GeneratorNet& g, std::span<const Condition> conditions,
                                              std::size_t samples, std::uint64_t master_seed,
                                              std::size_t threads = 1);

// asset_id,timestamp,p_minus,p_zero,p_plus,c_m,score,risk_U,I
void write_predictions_csv(std::span<const AssetPrediction> predictions, const std::filesystem::path& path);

}  // namespace predacgan::predict
