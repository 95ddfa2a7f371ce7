#pragma once

#include "predacgan/nn/network.hpp"

#include <functional>
#include <string>
#include <vector>

namespace predacgan::nn {

struct LossAndGrad {
    double loss = 0.0;
    std::vector<Matrix> output_grads;  // d loss / d output, one per network output
};

using LossFn = std::function<LossAndGrad(const std::vector<Matrix>& outputs)>;

struct GradientCheckOptions {
    double step = 1e-5;
    double tolerance = 1e-4;
};

struct GradientCheckResult {
    double max_relative_error = 0.0;
    std::string worst_parameter;
    std::size_t checked = 0;
    // Parameters whose +/- step perturbation flips a relu gate anywhere in
    // the batch; central differences are meaningless across a kink.
    std::size_t skipped_near_kink = 0;
    bool passed = true;
};

// Compares backward() against central finite differences on every
// parameter. Relative error is |a - n| / max(|a|, |n|, 1e-8). Intended for
// small networks; cost is two forward passes per parameter.
GradientCheckResult gradient_check(const Network& net, const Matrix& input, const LossFn& loss_fn,
                                   GradientCheckOptions options = {});

}  // namespace predacgan::nn
