#pragma once

#include "predacgan/data/prices.hpp"

#include <array>
#include <cstddef>
#include <string_view>
#include <vector>

namespace predacgan::data {

// Discretized forward return. The numeric values double as category
// indices into probability vectors.
enum class Category : int { minus = 0, zero = 1, plus = 2 };

inline constexpr std::size_t kCategoryCount = 3;

std::string_view to_string(Category c);
Category category_from_string(std::string_view text);
std::array<double, kCategoryCount> one_hot(Category c);
inline std::size_t index_of(Category c) { return static_cast<std::size_t>(c); }

// minus if r < lower; zero if lower <= r < upper; plus if upper <= r.
// Requires lower < upper (ConfigError otherwise).
Category discretize(double r, double lower, double upper);

struct FeatureVector {
    std::vector<double> values;
    TimeIndex anchor_time = 0;
};

// values[j] = (P(t-1-j) - P(t)) / P(t) for j = 0..window-1. Needs every
// day in [t - window, t]; WindowError otherwise.
FeatureVector build_features(const PriceSeries& series, TimeIndex t, std::size_t window);
bool has_feature_window(const PriceSeries& series, TimeIndex t, std::size_t window);

// (P(t + horizon) - P(t)) / P(t). Needs both endpoint observations.
double build_label(const PriceSeries& series, TimeIndex t, std::size_t horizon);
bool has_label_window(const PriceSeries& series, TimeIndex t, std::size_t horizon);

}  // namespace predacgan::data
