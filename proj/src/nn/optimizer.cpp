#include "predacgan/nn/optimizer.hpp"

#include "predacgan/common/errors.hpp"

#include <cmath>

namespace predacgan::nn {

namespace {

template <class Param>
void update(Param& param, const Param& grad, Param& m, Param& v, const AdamConfig& cfg, double correction1,
            double correction2) {
    m.array() = cfg.beta1 * m.array() + (1.0 - cfg.beta1) * grad.array();
    v.array() = cfg.beta2 * v.array() + (1.0 - cfg.beta2) * grad.array().square();
    param.array() -= cfg.learning_rate * (m.array() / correction1) /
                     ((v.array() / correction2).sqrt() + cfg.epsilon);
}

}  // namespace

AdamState AdamState::for_network(const Network& net, AdamConfig config) {
    AdamState state;
    state.config = config;
    for (std::size_t i = 0; i < net.layer_count(); ++i) {
        state.first_moment.emplace_back(net.layer(i).fan_in(), net.layer(i).fan_out());
        state.second_moment.emplace_back(net.layer(i).fan_in(), net.layer(i).fan_out());
    }
    return state;
}

void adam_step(Network& net, const Gradients& grads, AdamState& state) {
    const std::size_t n = net.layer_count();
    if (grads.layers.size() != n || state.first_moment.size() != n || state.second_moment.size() != n) {
        throw ShapeError("adam_step: parameter, gradient and moment layouts differ");
    }
    for (std::size_t i = 0; i < n; ++i) {
        const auto& p = net.layer(i);
        const auto& g = grads.layers[i];
        if (g.weight.rows() != p.weight.rows() || g.weight.cols() != p.weight.cols() ||
            g.bias.size() != p.bias.size()) {
            throw ShapeError("adam_step: gradient shape mismatch in " + net.layer_name(i));
        }
        if (!g.all_finite()) {
            throw NumericError("adam_step: non-finite gradient in " + net.layer_name(i));
        }
    }

    ++state.step_count;
    const auto t = static_cast<double>(state.step_count);
    const double c1 = 1.0 - std::pow(state.config.beta1, t);
    const double c2 = 1.0 - std::pow(state.config.beta2, t);
    for (std::size_t i = 0; i < n; ++i) {
        auto& p = net.mutable_layer(i);
        const auto& g = grads.layers[i];
        auto& m = state.first_moment[i];
        auto& v = state.second_moment[i];
        update(p.weight, g.weight, m.weight, v.weight, state.config, c1, c2);
        update(p.bias, g.bias, m.bias, v.bias, state.config, c1, c2);
    }
    net.mark_updated();
}

}  // namespace predacgan::nn
