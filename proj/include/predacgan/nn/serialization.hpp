#pragma once

#include "predacgan/nn/network.hpp"

#include <json.hpp>

#include <filesystem>

namespace predacgan::nn {

inline constexpr int kNetworkFormatVersion = 1;

// JSON container:
//   {"format_version": 1, "input_dim": n,
//    "trunk": [{"fan_in", "fan_out", "activation", "weight": [row-major], "bias": [...]}, ...],
//    "heads": [{"name", "fan_in", "fan_out", "activation", "weight", "bias"}, ...]}
// Reals are written with enough digits to parse back bit-identically.
nlohmann::json to_json(const Network& net);
Network network_from_json(const nlohmann::json& doc);

void save_network(const Network& net, const std::filesystem::path& path);
Network load_network(const std::filesystem::path& path);

}  // namespace predacgan::nn
