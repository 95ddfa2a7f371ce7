#pragma once

#include "predacgan/data/features.hpp"

#include <array>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace predacgan::data {

struct TrainingPair {
    FeatureVector x;
    Category c = Category::zero;
    double r = 0.0;
    std::string asset_id;
    TimeIndex t = 0;
};

struct DatasetParams {
    std::size_t input_window = 200;  // T_i
    std::size_t horizon = 21;        // T_o
    double lower_threshold = -0.03;  // Th_l
    double upper_threshold = 0.03;   // Th_u
};

struct SkippedSample {
    std::string asset_id;
    TimeIndex t = 0;
    std::string reason;
};

struct Dataset {
    std::vector<TrainingPair> pairs;  // sorted by (asset_id, t)
    std::vector<SkippedSample> skipped;
};

// One pair per (asset, time) with enough history and future; everything
// else lands in `skipped`. DataError if no pair survives.
Dataset build_dataset(const Universe& universe, std::span<const TimeIndex> sample_times,
                      const DatasetParams& params);

// first, first + stride, ... up to and including last.
std::vector<TimeIndex> stride_times(TimeIndex first, TimeIndex last, TimeIndex stride);

std::array<std::size_t, kCategoryCount> category_histogram(std::span<const TrainingPair> pairs);

// asset_id,t,x0..x{T_i-1},r,category
void write_dataset_csv(const Dataset& dataset, const std::filesystem::path& path);

}  // namespace predacgan::data
