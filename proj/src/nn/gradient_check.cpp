#include "predacgan/nn/gradient_check.hpp"

#include <algorithm>
#include <cmath>

namespace predacgan::nn {

namespace {

bool same_relu_gates(const Network& net, const ForwardCache& a, const ForwardCache& b) {
    for (std::size_t i = 0; i < net.trunk().size(); ++i) {
        if (net.activations()[i] != Activation::relu) {
            continue;
        }
        if (((a.trunk_pre[i].array() > 0.0) != (b.trunk_pre[i].array() > 0.0)).any()) {
            return false;
        }
    }
    for (std::size_t h = 0; h < net.heads().size(); ++h) {
        if (net.heads()[h].activation != Activation::relu) {
            continue;
        }
        if (((a.head_pre[h].array() > 0.0) != (b.head_pre[h].array() > 0.0)).any()) {
            return false;
        }
    }
    return true;
}

}  // namespace

GradientCheckResult gradient_check(const Network& net, const Matrix& input, const LossFn& loss_fn,
                                   GradientCheckOptions options) {
    const auto base = forward(net, input);
    const auto analytic_loss = loss_fn(base.outputs);
    const auto analytic = backward(net, base.cache, analytic_loss.output_grads);

    GradientCheckResult result;
    Network probe = net;

    auto check_entry = [&](std::size_t layer, double& slot, double analytic_value, const std::string& label) {
        const double saved = slot;
        slot = saved + options.step;
        const auto plus = forward(probe, input);
        const double loss_plus = loss_fn(plus.outputs).loss;
        slot = saved - options.step;
        const auto minus = forward(probe, input);
        const double loss_minus = loss_fn(minus.outputs).loss;
        slot = saved;

        if (!same_relu_gates(net, base.cache, plus.cache) || !same_relu_gates(net, base.cache, minus.cache)) {
            ++result.skipped_near_kink;
            return;
        }
        const double numeric = (loss_plus - loss_minus) / (2.0 * options.step);
        const double denom = std::max({std::abs(analytic_value), std::abs(numeric), 1e-8});
        const double rel = std::abs(analytic_value - numeric) / denom;
        ++result.checked;
        if (rel > result.max_relative_error) {
            result.max_relative_error = rel;
            result.worst_parameter = net.layer_name(layer) + label;
        }
    };

    for (std::size_t i = 0; i < probe.layer_count(); ++i) {
        auto& layer = probe.mutable_layer(i);
        const auto& grad = analytic.layers[i];
        for (Eigen::Index r = 0; r < layer.weight.rows(); ++r) {
            for (Eigen::Index c = 0; c < layer.weight.cols(); ++c) {
                check_entry(i, layer.weight(r, c), grad.weight(r, c),
                            ".weight(" + std::to_string(r) + "," + std::to_string(c) + ")");
            }
        }
        for (Eigen::Index r = 0; r < layer.bias.size(); ++r) {
            check_entry(i, layer.bias(r), grad.bias(r), ".bias(" + std::to_string(r) + ")");
        }
    }
    result.passed = result.max_relative_error <= options.tolerance;
    return result;
}

}  // namespace predacgan::nn
