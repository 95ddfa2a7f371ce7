#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace predacgan {

using Rng = std::mt19937_64;

// SplitMix64 finalizer; used to derive independent child seeds.
std::uint64_t mix_seed(std::uint64_t x) noexcept;

// Derives a child seed from a master seed and up to two stream keys.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t key_a, std::uint64_t key_b = 0) noexcept;

// FNV-1a over the bytes of `text`; stable across builds and platforms.
std::uint64_t stable_hash(std::string_view text) noexcept;

}  // namespace predacgan
