#include "predacgan/data/synth.hpp"

#include "predacgan/common/csv.hpp"
#include "predacgan/common/errors.hpp"
#include "predacgan/common/random.hpp"

#include <cmath>
#include <cstdio>
#include <random>

namespace predacgan::data {

void SynthConfig::validate() const {
    if (n_signal_assets + n_noise_assets == 0) {
        throw ConfigError("synthetic market needs at least one asset");
    }
    if (!(signal_strength >= 0.0)) {
        throw ConfigError("signal_strength must be >= 0");
    }
    if (!(noise_sigma > 0.0)) {
        throw ConfigError("noise_sigma must be > 0");
    }
    if (input_window == 0 || horizon == 0) {
        throw ConfigError("T_i and T_o must be positive");
    }
    if (n_days <= input_window + horizon) {
        throw ConfigError("n_days must exceed T_i + T_o");
    }
    if (!(initial_price > 0.0)) {
        throw ConfigError("initial_price must be > 0");
    }
}

std::string_view to_string(AssetKind k) {
    return k == AssetKind::signal ? "signal" : "noise";
}

AssetKind asset_kind_from_string(std::string_view text) {
    if (text == "signal") return AssetKind::signal;
    if (text == "noise") return AssetKind::noise;
    throw DataError("unknown asset kind '" + std::string(text) + "'");
}

SynthMarket synth_market(const SynthConfig& config) {
    config.validate();
    SynthMarket market;
    const std::size_t n_assets = config.n_signal_assets + config.n_noise_assets;
    const double sigma = config.noise_sigma;
    const double window_scale = sigma * std::sqrt(static_cast<double>(config.input_window));

    for (std::size_t a = 0; a < n_assets; ++a) {
        char id[32];
        std::snprintf(id, sizeof id, "A%03zu", a);
        const AssetKind kind = a < config.n_signal_assets ? AssetKind::signal : AssetKind::noise;
        market.manifest.push_back({id, kind});

        // Per-asset stream so adding assets never perturbs existing ones.
        Rng rng(derive_seed(config.rng_seed, 0x5e41u, a));
        std::normal_distribution<double> shock(0.0, 1.0);

        PriceSeries s;
        s.asset_id = id;
        s.dates.resize(config.n_days);
        s.closes.resize(config.n_days);
        std::vector<double> log_returns;
        log_returns.reserve(config.n_days);
        double log_change = 0.0;
        double window_sum = 0.0;
        for (std::size_t d = 0; d < config.n_days; ++d) {
            s.dates[d] = static_cast<TimeIndex>(d);
            s.closes[d] = config.initial_price * std::exp(log_change);
            double drift = 0.0;
            if (kind == AssetKind::signal && log_returns.size() >= config.input_window) {
                drift = config.signal_strength * sigma * std::tanh(window_sum / window_scale);
            }
            const double ret = drift + sigma * shock(rng);
            log_returns.push_back(ret);
            window_sum += ret;
            if (log_returns.size() > config.input_window) {
                window_sum -= log_returns[log_returns.size() - 1 - config.input_window];
            }
            log_change += ret;
        }
        market.series.push_back(std::move(s));
    }
    return market;
}

void write_manifest(const std::vector<ManifestEntry>& manifest, const std::filesystem::path& path) {
    auto out = csv::open_output(path);
    out << "asset_id,kind\n";
    for (const auto& m : manifest) {
        out << m.asset_id << ',' << to_string(m.kind) << '\n';
    }
    if (!out) {
        throw IoError("write failed for " + path.string());
    }
}

std::vector<ManifestEntry> load_manifest(const std::filesystem::path& path) {
    const auto lines = csv::read_lines(path);
    if (lines.empty() || csv::split_line(lines.front()) != std::vector<std::string>{"asset_id", "kind"}) {
        throw ParseError(1, "expected header 'asset_id,kind'");
    }
    std::vector<ManifestEntry> manifest;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        if (lines[i].empty()) {
            continue;
        }
        const auto f = csv::split_line(lines[i]);
        if (f.size() != 2) {
            throw ParseError(i + 1, "expected 2 fields");
        }
        manifest.push_back({f[0], asset_kind_from_string(f[1])});
    }
    return manifest;
}

}  // namespace predacgan::data
