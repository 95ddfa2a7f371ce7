#include "predacgan/data/features.hpp"

#include "predacgan/common/errors.hpp"

namespace predacgan::data {

std::string_view to_string(Category c) {
    switch (c) {
        case Category::minus:
            return "c_minus";
        case Category::zero:
            return "c_zero";
        case Category::plus:
            return "c_plus";
    }
    return "c_zero";
}

Category category_from_string(std::string_view text) {
    if (text == "c_minus") return Category::minus;
    if (text == "c_zero") return Category::zero;
    if (text == "c_plus") return Category::plus;
    throw DataError("unknown category tag '" + std::string(text) + "'");
}

std::array<double, kCategoryCount> one_hot(Category c) {
    std::array<double, kCategoryCount> v{0.0, 0.0, 0.0};
    v[index_of(c)] = 1.0;
    return v;
}

Category discretize(double r, double lower, double upper) {
    if (!(lower < upper)) {
        throw ConfigError("discretize requires Th_l < Th_u");
    }
    if (r < lower) {
        return Category::minus;
    }
    if (r < upper) {
        return Category::zero;
    }
    return Category::plus;
}

bool has_feature_window(const PriceSeries& series, TimeIndex t, std::size_t window) {
    return window > 0 && series.covers(t - static_cast<TimeIndex>(window), t);
}

FeatureVector build_features(const PriceSeries& series, TimeIndex t, std::size_t window) {
    if (window == 0) {
        throw WindowError("feature window must be positive");
    }
    if (!has_feature_window(series, t, window)) {
        throw WindowError(series.asset_id + ": no contiguous history of " + std::to_string(window) +
                          " days before t=" + std::to_string(t));
    }
    const std::size_t anchor = *series.position(t);
    const double p_t = series.closes[anchor];
    FeatureVector fv;
    fv.anchor_time = t;
    fv.values.resize(window);
    for (std::size_t j = 0; j < window; ++j) {
        fv.values[j] = (series.closes[anchor - 1 - j] - p_t) / p_t;
    }
    return fv;
}

bool has_label_window(const PriceSeries& series, TimeIndex t, std::size_t horizon) {
    return horizon > 0 && series.position(t) && series.position(t + static_cast<TimeIndex>(horizon));
}

double build_label(const PriceSeries& series, TimeIndex t, std::size_t horizon) {
    if (!has_label_window(series, t, horizon)) {
        throw WindowError(series.asset_id + ": no observation at t=" + std::to_string(t) + " and t+" +
                          std::to_string(horizon));
    }
    const double p_t = *series.close_at(t);
    const double p_future = *series.close_at(t + static_cast<TimeIndex>(horizon));
    return (p_future - p_t) / p_t;
}

}  // namespace predacgan::data
