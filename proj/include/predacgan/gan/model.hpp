#pragma once

#include "predacgan/common/random.hpp"
#include "predacgan/nn/network.hpp"

#include <cstddef>
#include <cstdint>

namespace predacgan::gan {

using nn::Matrix;

inline constexpr std::size_t kCategories = 3;

// Hyperparameters. Defaults are the full-scale published configuration;
// the hidden widths can be narrowed for desk-scale runs.
struct TrainConfig {
    double lr_d = 2e-5;
    double lr_g = 1e-5;
    double beta1 = 0.0;
    double beta2 = 0.9;
    double adam_epsilon = 1e-8;
    double lambda_cg = 32.0;
    double lambda_cd = 1.0;
    std::size_t batch_size = 16;
    std::size_t epochs = 128;
    std::size_t noise_dim = 128;
    std::size_t generator_hidden = 1024;
    std::size_t discriminator_hidden = 2048;
    std::uint64_t rng_seed = 0;

    void validate() const;
};

// G(z, X): input [z | X] -> relu hidden -> softmax over the 3 categories.
class GeneratorNet {
public:
    GeneratorNet(nn::Network net, std::size_t noise_dim, std::size_t condition_dim);

    static GeneratorNet create(std::size_t noise_dim, std::size_t condition_dim, std::size_t hidden,
                               std::uint64_t seed);

    const nn::Network& network() const noexcept { return net_; }
    nn::Network& network() noexcept { return net_; }
    std::size_t noise_dim() const noexcept { return noise_dim_; }
    std::size_t condition_dim() const noexcept { return condition_dim_; }

    // Row i is [z_i | x_i].
    Matrix join_inputs(const Matrix& z, const Matrix& x) const;
    Matrix probabilities(const Matrix& z, const Matrix& x) const;

private:
    nn::Network net_;
    std::size_t noise_dim_;
    std::size_t condition_dim_;
};

// D: 3-vector -> relu hidden -> relu hidden, with an adversarial scalar head
// and a classification head that regresses the condition X.
class DiscriminatorNet {
public:
    static constexpr std::size_t kAdversarial = 0;
    static constexpr std::size_t kClassification = 1;

    DiscriminatorNet(nn::Network net, std::size_t condition_dim);

    static DiscriminatorNet create(std::size_t condition_dim, std::size_t hidden, std::uint64_t seed);

    const nn::Network& network() const noexcept { return net_; }
    nn::Network& network() noexcept { return net_; }
    std::size_t condition_dim() const noexcept { return condition_dim_; }

private:
    nn::Network net_;
    std::size_t condition_dim_;
};

// count x dim matrix of independent N(0, 1) draws, filled row by row.
Matrix sample_noise(std::size_t count, std::size_t dim, Rng& rng);

}  // namespace predacgan::gan
