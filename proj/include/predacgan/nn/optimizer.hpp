#pragma once

#include "predacgan/nn/network.hpp"

#include <cstdint>
#include <vector>

namespace predacgan::nn {

struct AdamConfig {
    double learning_rate = 1e-3;
    double beta1 = 0.0;
    double beta2 = 0.9;
    double epsilon = 1e-8;
};

// First and second moments shaped like the network's flat parameter view.
struct AdamState {
    AdamConfig config;
    std::vector<DenseLayer> first_moment;
    std::vector<DenseLayer> second_moment;
    std::uint64_t step_count = 0;

    static AdamState for_network(const Network& net, AdamConfig config);
};

// Bias-corrected Adam update, applied in place. All gradients are checked for
// finiteness before any parameter moves; a NumericError names the first
// offending layer.
void adam_step(Network& net, const Gradients& grads, AdamState& state);

}  // namespace predacgan::nn
