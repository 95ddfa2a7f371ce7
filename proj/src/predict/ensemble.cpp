#include "predacgan/predict/ensemble.hpp"

#include "predacgan/common/csv.hpp"
#include "predacgan/common/errors.hpp"
#include "predacgan/common/parallel.hpp"

#include <algorithm>
#include <cmath>

namespace predacgan::predict {

PredictionEnsemble ensemble_predict(const gan::GeneratorNet& g, std::span<const double> x, std::size_t samples,
                                    Rng& rng, ConditionId condition) {
    if (samples == 0) {
        throw ShapeError("ensemble needs at least one sample");
    }
    if (x.size() != g.condition_dim()) {
        throw ShapeError("condition has " + std::to_string(x.size()) + " values, generator expects " +
                         std::to_string(g.condition_dim()));
    }
    const auto rows = static_cast<Eigen::Index>(samples);
    Matrix conditions(rows, static_cast<Eigen::Index>(x.size()));
    for (Eigen::Index r = 0; r < rows; ++r) {
        for (std::size_t j = 0; j < x.size(); ++j) {
            conditions(r, static_cast<Eigen::Index>(j)) = x[j];
        }
    }
    const Matrix z = gan::sample_noise(samples, g.noise_dim(), rng);
    return PredictionEnsemble{g.probabilities(z, conditions), std::move(condition)};
}

data::Category modal_category(const PredictionEnsemble& ensemble) {
    double sums[data::kCategoryCount] = {0.0, 0.0, 0.0};
    for (Eigen::Index i = 0; i < ensemble.samples.rows(); ++i) {
        for (std::size_t c = 0; c < data::kCategoryCount; ++c) {
            sums[c] += ensemble.samples(i, static_cast<Eigen::Index>(c));
        }
    }
    std::size_t best = 0;
    for (std::size_t c = 1; c < data::kCategoryCount; ++c) {
        if (sums[c] > sums[best]) {
            best = c;
        }
    }
    return static_cast<data::Category>(best);
}

double risk_measure(const PredictionEnsemble& ensemble, data::Category modal, double clamp) {
    const auto column = static_cast<Eigen::Index>(data::index_of(modal));
    double u = 0.0;
    for (Eigen::Index i = 0; i < ensemble.samples.rows(); ++i) {
        const double p = std::clamp(ensemble.samples(i, column), clamp, 1.0 - clamp);
        u -= (2.0 * p - 1.0) * std::log(p / (1.0 - p));
    }
    return u;
}

AssetPrediction aggregate(const PredictionEnsemble& ensemble) {
    const std::size_t n = ensemble.size();
    if (n == 0) {
        throw ShapeError("cannot aggregate an empty ensemble");
    }
    AssetPrediction out;
    out.asset_id = ensemble.condition.asset_id;
    out.t = ensemble.condition.t;
    out.samples = n;

    const Eigen::RowVectorXd mean = ensemble.samples.colwise().mean();
    double median_sum = 0.0;
    std::vector<double> column(n);
    for (std::size_t c = 0; c < data::kCategoryCount; ++c) {
        const auto ci = static_cast<Eigen::Index>(c);
        out.mean_probs[c] = mean(ci);
        for (std::size_t i = 0; i < n; ++i) {
            column[i] = ensemble.samples(static_cast<Eigen::Index>(i), ci);
        }
        std::sort(column.begin(), column.end());
        const double med = n % 2 == 1 ? column[n / 2] : 0.5 * (column[n / 2 - 1] + column[n / 2]);
        out.median_probs[c] = med;
        median_sum += med;
    }
    if (median_sum > 0.0) {
        for (auto& m : out.median_probs) {
            m /= median_sum;
        }
    } else {
        out.median_probs = out.mean_probs;
    }

    out.modal = modal_category(ensemble);
    out.score = out.mean_probs[data::index_of(data::Category::plus)] -
                out.mean_probs[data::index_of(data::Category::minus)];
    out.risk = risk_measure(ensemble, out.modal);
    return out;
}

std::uint64_t condition_seed(std::uint64_t master_seed, const std::string& asset_id, data::TimeIndex t) {
    return derive_seed(master_seed, stable_hash(asset_id), static_cast<std::uint64_t>(t));
}

std::vector<AssetPrediction> predict_universe(const gan::GeneratorNet& g, std::span<const Condition> conditions,
                                              std::size_t samples, std::uint64_t master_seed,
                                              std::size_t threads) {
    std::vector<AssetPrediction> out(conditions.size());
    parallel_for(conditions.size(), threads, [&](std::size_t i) {
        const auto& cond = conditions[i];
        try {
            Rng rng(condition_seed(master_seed, cond.asset_id, cond.t));
            out[i] = aggregate(ensemble_predict(g, cond.x, samples, rng, ConditionId{cond.asset_id, cond.t}));
        } catch (const ShapeError& e) {
            throw ShapeError("asset " + cond.asset_id + ": " + e.what());
        } catch (const Error& e) {
            throw Error("asset " + cond.asset_id + ": " + e.what());
        }
    });
    return out;
}

void write_predictions_csv(std::span<const AssetPrediction> predictions, const std::filesystem::path& path) {
    auto out = csv::open_output(path);
    out << "asset_id,timestamp,p_minus,p_zero,p_plus,c_m,score,risk_U,I\n";
    for (const auto& p : predictions) {
        out << p.asset_id << ',' << p.t << ',' << csv::format_real(p.mean_probs[0]) << ','
            << csv::format_real(p.mean_probs[1]) << ',' << csv::format_real(p.mean_probs[2]) << ','
            << data::to_string(p.modal) << ',' << csv::format_real(p.score) << ',' << csv::format_real(p.risk)
            << ',' << p.samples << '\n';
    }
    if (!out) {
        throw IoError("write failed for " + path.string());
    }
}

}  // namespace predacgan::predict
