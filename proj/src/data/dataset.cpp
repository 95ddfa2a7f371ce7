#include "predacgan/data/dataset.hpp"

#include "predacgan/common/csv.hpp"
#include "predacgan/common/errors.hpp"

#include <algorithm>

namespace predacgan::data {

Dataset build_dataset(const Universe& universe, std::span<const TimeIndex> sample_times,
                      const DatasetParams& params) {
    if (params.input_window == 0 || params.horizon == 0) {
        throw ConfigError("T_i and T_o must be positive");
    }
    if (!(params.lower_threshold < params.upper_threshold)) {
        throw ConfigError("Th_l must be below Th_u");
    }
    if (!std::is_sorted(sample_times.begin(), sample_times.end())) {
        throw ConfigError("sample times must be sorted");
    }

    Dataset out;
    for (const auto& series : universe) {
        for (const TimeIndex t : sample_times) {
            if (!has_feature_window(series, t, params.input_window)) {
                out.skipped.push_back({series.asset_id, t, "insufficient history"});
                continue;
            }
            if (!has_label_window(series, t, params.horizon)) {
                out.skipped.push_back({series.asset_id, t, "insufficient future"});
                continue;
            }
            TrainingPair pair;
            pair.x = build_features(series, t, params.input_window);
            pair.r = build_label(series, t, params.horizon);
            pair.c = discretize(pair.r, params.lower_threshold, params.upper_threshold);
            pair.asset_id = series.asset_id;
            pair.t = t;
            out.pairs.push_back(std::move(pair));
        }
    }
    if (out.pairs.empty()) {
        throw DataError("dataset is empty: no (asset, time) has both T_i history and T_o future");
    }
    std::stable_sort(out.pairs.begin(), out.pairs.end(), [](const TrainingPair& a, const TrainingPair& b) {
        return a.asset_id != b.asset_id ? a.asset_id < b.asset_id : a.t < b.t;
    });
    return out;
}

std::vector<TimeIndex> stride_times(TimeIndex first, TimeIndex last, TimeIndex stride) {
    if (stride < 1) {
        throw ConfigError("stride must be >= 1");
    }
    std::vector<TimeIndex> times;
    for (TimeIndex t = first; t <= last; t += stride) {
        times.push_back(t);
    }
    return times;
}

std::array<std::size_t, kCategoryCount> category_histogram(std::span<const TrainingPair> pairs) {
    std::array<std::size_t, kCategoryCount> h{0, 0, 0};
    for (const auto& p : pairs) {
        ++h[index_of(p.c)];
    }
    return h;
}

void write_dataset_csv(const Dataset& dataset, const std::filesystem::path& path) {
    auto out = csv::open_output(path);
    const std::size_t width = dataset.pairs.empty() ? 0 : dataset.pairs.front().x.values.size();
    out << "asset_id,t";
    for (std::size_t j = 0; j < width; ++j) {
        out << ",x" << j;
    }
    out << ",r,category\n";
    for (const auto& p : dataset.pairs) {
        out << p.asset_id << ',' << p.t;
        for (double v : p.x.values) {
            out << ',' << csv::format_real(v);
        }
        out << ',' << csv::format_real(p.r) << ',' << to_string(p.c) << '\n';
    }
    if (!out) {
        throw IoError("write failed for " + path.string());
    }
}

}  // namespace predacgan::data
