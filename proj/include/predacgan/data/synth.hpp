#pragma once

#include "predacgan/data/prices.hpp"

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace predacgan::data {

// Seeded stand-in for a real equity universe.
//
// Every asset is a log-price random walk with daily shock noise_sigma * N(0,1).
// Signal assets add a drift driven by a statistic of their own last T_i
// log-returns: the standardized window sum z = S / (sigma * sqrt(T_i)) gives
// drift = signal_strength * sigma * tanh(z), a trend-following drift whose
// next-T_o move is readable from the feature window. Noise assets have no
// drift. With signal_strength = 0 both kinds follow the same law.
struct SynthConfig {
    std::size_t n_signal_assets = 10;
    std::size_t n_noise_assets = 10;
    double signal_strength = 1.0;
    double noise_sigma = 0.03;
    std::size_t n_days = 800;
    std::size_t input_window = 16;  // T_i
    std::size_t horizon = 5;        // T_o
    double initial_price = 100.0;
    std::uint64_t rng_seed = 0;

    void validate() const;
};

enum class AssetKind { signal, noise };

std::string_view to_string(AssetKind k);
AssetKind asset_kind_from_string(std::string_view text);

struct ManifestEntry {
    std::string asset_id;
    AssetKind kind = AssetKind::noise;
};

struct SynthMarket {
    Universe series;
    std::vector<ManifestEntry> manifest;
};

SynthMarket synth_market(const SynthConfig& config);

// asset_id,kind
void write_manifest(const std::vector<ManifestEntry>& manifest, const std::filesystem::path& path);
std::vector<ManifestEntry> load_manifest(const std::filesystem::path& path);

}  // namespace predacgan::data
