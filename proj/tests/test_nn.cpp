#include "oracles.hpp"

#include "predacgan/common/errors.hpp"
#include "predacgan/common/random.hpp"
#include "predacgan/nn/gradient_check.hpp"
#include "predacgan/nn/network.hpp"
#include "predacgan/nn/optimizer.hpp"
#include "predacgan/nn/serialization.hpp"

#include <gtest/gtest.h>

#include <filesystem>

using namespace predacgan;
using namespace predacgan::nn;

namespace {

Network random_mlp(std::size_t in, std::vector<std::size_t> widths, std::vector<Activation> acts,
                   std::uint64_t seed) {
    std::vector<DenseLayer> layers;
    std::size_t fan_in = in;
    for (std::size_t i = 0; i < widths.size(); ++i) {
        layers.push_back(xavier_init(fan_in, widths[i], derive_seed(seed, i)));
        fan_in = widths[i];
    }
    return Network(in, std::move(layers), std::move(acts));
}

Matrix uniform(Eigen::Index rows, Eigen::Index cols, std::uint64_t seed, double lo = -1.0, double hi = 1.0) {
    Rng rng(seed);
    std::uniform_real_distribution<double> u(lo, hi);
    Matrix m(rows, cols);
    for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = u(rng);
    return m;
}

LossFn squared_loss(Matrix target) {
    return [target](const std::vector<Matrix>& out) {
        const Matrix diff = out[0] - target;
        return LossAndGrad{0.5 * diff.squaredNorm(), {diff}};
    };
}

}  // namespace

TEST(Xavier, BoundClosedForm) {
    EXPECT_NEAR(xavier_bound(200, 1024), std::sqrt(6.0 / 1224.0), 1e-15);
    EXPECT_NEAR(xavier_bound(200, 1024), 0.0700, 5e-5);
}

TEST(Xavier, SamplesStayInsideBound) {
    const auto layer = xavier_init(40, 30, 9);
    const double a = xavier_bound(40, 30);
    EXPECT_LE(layer.weight.cwiseAbs().maxCoeff(), a);
    EXPECT_TRUE(layer.bias.isZero());
}

TEST(Forward, SingleReluUnit) {
    DenseLayer l(1, 1);
    l.weight(0, 0) = 2.0;
    l.bias(0) = 1.0;
    Network net(1, {l}, {Activation::relu});
    Matrix x(1, 1);
    x << 3.0;
    EXPECT_DOUBLE_EQ(evaluate(net, x)[0](0, 0), 7.0);
    x << -3.0;
    EXPECT_DOUBLE_EQ(evaluate(net, x)[0](0, 0), 0.0);
}

TEST(Forward, RejectsWrongInputWidth) {
    auto net = random_mlp(4, {3}, {Activation::identity}, 1);
    EXPECT_THROW(forward(net, Matrix::Zero(2, 5)), ShapeError);
}

TEST(Forward, SoftmaxRowsArePropabilityVectors) {
    const Matrix logits = uniform(50, 3, 7, -800.0, 800.0);
    const Matrix p = softmax_rows(logits);
    for (Eigen::Index i = 0; i < p.rows(); ++i) {
        EXPECT_GE(p.row(i).minCoeff(), 0.0);
        EXPECT_NEAR(p.row(i).sum(), 1.0, 1e-9);
    }
}

TEST(Forward, DeterministicAcrossCalls) {
    auto net = random_mlp(6, {8, 3}, {Activation::relu, Activation::softmax}, 3);
    const Matrix x = uniform(5, 6, 4);
    EXPECT_EQ(evaluate(net, x)[0], evaluate(net, x)[0]);
}

TEST(Network, SoftmaxOnlyOnFinalLayer) {
    std::vector<DenseLayer> layers{xavier_init(2, 3, 1), xavier_init(3, 1, 2)};
    EXPECT_THROW(Network(2, layers, {Activation::softmax, Activation::identity}), ShapeError);
}

TEST(Backward, StaleCacheRejected) {
    auto net = random_mlp(3, {2}, {Activation::identity}, 5);
    const auto fr = forward(net, uniform(2, 3, 6));
    net.mark_updated();
    const std::vector<Matrix> g{Matrix::Ones(2, 2)};
    EXPECT_THROW(backward(net, fr.cache, g), CacheError);
    const Network other = net;
    EXPECT_THROW(backward(other, fr.cache, g), CacheError);
}

TEST(GradientCheck, LinearNetSquaredLoss) {
    auto net = random_mlp(5, {4, 3}, {Activation::identity, Activation::identity}, 11);
    const auto r = gradient_check(net, uniform(6, 5, 12), squared_loss(uniform(6, 3, 13)));
    EXPECT_LT(r.max_relative_error, 1e-6);
    EXPECT_TRUE(r.passed);
}

TEST(GradientCheck, ReluNetAwayFromKinks) {
    for (std::uint64_t s = 0; s < 10; ++s) {
        auto net = random_mlp(4, {16, 16, 2}, {Activation::relu, Activation::relu, Activation::identity}, 100 + s);
        const auto r = gradient_check(net, uniform(8, 4, 200 + s), squared_loss(uniform(8, 2, 300 + s)));
        EXPECT_LT(r.max_relative_error, 1e-4) << r.worst_parameter;
    }
}

TEST(GradientCheck, SoftmaxOutputAndInputGradient) {
    auto net = random_mlp(3, {5, 3}, {Activation::relu, Activation::softmax}, 21);
    const Matrix x = uniform(4, 3, 22);
    const Matrix target = uniform(4, 3, 23, 0.0, 1.0);
    const auto r = gradient_check(net, x, squared_loss(target));
    EXPECT_LT(r.max_relative_error, 1e-4);

    const auto fr = forward(net, x);
    const std::vector<Matrix> g{fr.outputs[0] - target};
    const auto grads = backward(net, fr.cache, g, {false, true});
    const double h = 1e-6;
    for (Eigen::Index i = 0; i < x.size(); ++i) {
        Matrix up = x, down = x;
        up.data()[i] += h;
        down.data()[i] -= h;
        const double fd = (0.5 * (evaluate(net, up)[0] - target).squaredNorm() -
                           0.5 * (evaluate(net, down)[0] - target).squaredNorm()) /
                          (2 * h);
        EXPECT_LT(oracle::relative_error(grads.input.data()[i], fd), 1e-4);
    }
}

TEST(GradientCheck, CorruptedGradientIsReported) {
    auto net = random_mlp(3, {3}, {Activation::identity}, 31);
    const Matrix target = uniform(2, 3, 32);
    LossFn wrong = [target](const std::vector<Matrix>& out) {
        const Matrix diff = out[0] - target;
        return LossAndGrad{0.5 * diff.squaredNorm(), {2.0 * diff}};
    };
    const auto r = gradient_check(net, uniform(2, 3, 33), wrong);
    EXPECT_GT(r.max_relative_error, 1e-4);
    EXPECT_FALSE(r.passed);
}

TEST(Adam, FirstStepOnZeroParameter) {
    DenseLayer l(1, 1);
    Network net(1, {l}, {Activation::identity});
    auto state = AdamState::for_network(net, {2e-5, 0.0, 0.9, 1e-8});
    auto g = Gradients::zeros_like(net);
    g.layers[0].weight(0, 0) = 1.0;
    adam_step(net, g, state);
    EXPECT_NEAR(net.layer(0).weight(0, 0), -2e-5 / (1.0 + 1e-8), 1e-18);
}

TEST(Adam, MatchesScalarTrace) {
    DenseLayer l(1, 1);
    l.weight(0, 0) = 0.3;
    Network net(1, {l}, {Activation::identity});
    auto state = AdamState::for_network(net, {1e-3, 0.5, 0.9, 1e-8});
    auto g = Gradients::zeros_like(net);
    g.layers[0].weight(0, 0) = -0.7;
    const auto ref = oracle::scalar_adam_trace(0.3, -0.7, 1e-3, 0.5, 0.9, 1e-8, 5);
    for (double expected : ref) {
        adam_step(net, g, state);
        EXPECT_NEAR(net.layer(0).weight(0, 0), expected, 1e-15);
    }
}

TEST(Adam, ZeroGradientIsIdentity) {
    auto net = random_mlp(4, {3}, {Activation::identity}, 41);
    const Matrix before = net.layer(0).weight;
    auto state = AdamState::for_network(net, {1e-2, 0.0, 0.9, 1e-8});
    for (int i = 0; i < 3; ++i) adam_step(net, Gradients::zeros_like(net), state);
    EXPECT_EQ(net.layer(0).weight, before);
}

TEST(Adam, NonFiniteGradientNamesLayer) {
    auto net = random_mlp(2, {2}, {Activation::identity}, 42);
    auto state = AdamState::for_network(net, {1e-2, 0.0, 0.9, 1e-8});
    auto g = Gradients::zeros_like(net);
    g.layers[0].bias(1) = std::numeric_limits<double>::quiet_NaN();
    const Matrix before = net.layer(0).weight;
    EXPECT_THROW(adam_step(net, g, state), NumericError);
    EXPECT_EQ(net.layer(0).weight, before);
}

TEST(Serialization, RoundTripIsBitExact) {
    std::vector<Head> heads{{"a", xavier_init(6, 1, 3), Activation::identity},
                            {"b", xavier_init(6, 4, 4), Activation::identity}};
    std::vector<DenseLayer> trunk{xavier_init(3, 6, 1)};
    trunk[0].bias.setConstant(0.1 / 3.0);
    Network net(3, trunk, {Activation::relu}, heads);
    const auto path = std::filesystem::temp_directory_path() / "predacgan_test_net.json";
    save_network(net, path);
    const auto back = load_network(path);
    ASSERT_EQ(back.layer_count(), net.layer_count());
    for (std::size_t i = 0; i < net.layer_count(); ++i) {
        EXPECT_EQ(back.layer(i).weight, net.layer(i).weight);
        EXPECT_EQ(back.layer(i).bias, net.layer(i).bias);
    }
    EXPECT_EQ(back.output_names(), net.output_names());
    std::filesystem::remove(path);
}

TEST(Serialization, RejectsUnknownVersion) {
    auto doc = to_json(random_mlp(2, {2}, {Activation::identity}, 1));
    doc["format_version"] = 99;
    EXPECT_THROW(network_from_json(doc), Error);
}
