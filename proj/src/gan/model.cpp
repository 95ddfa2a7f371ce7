#include "predacgan/gan/model.hpp"

#include "predacgan/common/errors.hpp"

#include <random>

namespace predacgan::gan {

void TrainConfig::validate() const {
    if (!(lr_d > 0.0) || !(lr_g > 0.0)) {
        throw ConfigError("learning rates must be positive");
    }
    if (!(beta1 >= 0.0 && beta1 < 1.0) || !(beta2 >= 0.0 && beta2 < 1.0)) {
        throw ConfigError("Adam betas must lie in [0, 1)");
    }
    if (!(adam_epsilon > 0.0)) {
        throw ConfigError("Adam epsilon must be positive");
    }
    if (!(lambda_cg >= 0.0) || !(lambda_cd >= 0.0)) {
        throw ConfigError("classification weights must be non-negative");
    }
    if (batch_size < 1) {
        throw ConfigError("batch_size must be >= 1");
    }
    if (noise_dim < 1 || generator_hidden < 1 || discriminator_hidden < 1) {
        throw ConfigError("network widths must be >= 1");
    }
}

GeneratorNet::GeneratorNet(nn::Network net, std::size_t noise_dim, std::size_t condition_dim)
    : net_(std::move(net)), noise_dim_(noise_dim), condition_dim_(condition_dim) {
    if (net_.input_dim() != noise_dim_ + condition_dim_) {
        throw ShapeError("generator input width must equal noise_dim + condition_dim");
    }
    if (net_.output_count() != 1 || net_.output_dim(0) != kCategories ||
        net_.activations().back() != nn::Activation::softmax) {
        throw ShapeError("generator must end in a 3-way softmax");
    }
}

GeneratorNet GeneratorNet::create(std::size_t noise_dim, std::size_t condition_dim, std::size_t hidden,
                                  std::uint64_t seed) {
    const std::size_t in = noise_dim + condition_dim;
    std::vector<nn::DenseLayer> trunk{
        nn::xavier_init(in, hidden, derive_seed(seed, 0x6e, 0)),
        nn::xavier_init(hidden, kCategories, derive_seed(seed, 0x6e, 1)),
    };
    nn::Network net(in, std::move(trunk), {nn::Activation::relu, nn::Activation::softmax});
    return GeneratorNet(std::move(net), noise_dim, condition_dim);
}

Matrix GeneratorNet::join_inputs(const Matrix& z, const Matrix& x) const {
    if (static_cast<std::size_t>(z.cols()) != noise_dim_ || static_cast<std::size_t>(x.cols()) != condition_dim_ ||
        z.rows() != x.rows()) {
        throw ShapeError("generator inputs: z is " + std::to_string(z.rows()) + "x" + std::to_string(z.cols()) +
                         ", X is " + std::to_string(x.rows()) + "x" + std::to_string(x.cols()) + ", expected width " +
                         std::to_string(noise_dim_) + " and " + std::to_string(condition_dim_));
    }
    Matrix joined(z.rows(), z.cols() + x.cols());
    joined << z, x;
    return joined;
}

Matrix GeneratorNet::probabilities(const Matrix& z, const Matrix& x) const {
    return nn::evaluate(net_, join_inputs(z, x)).front();
}

DiscriminatorNet::DiscriminatorNet(nn::Network net, std::size_t condition_dim)
    : net_(std::move(net)), condition_dim_(condition_dim) {
    if (net_.input_dim() != kCategories || net_.heads().size() != 2 ||
        net_.output_dim(kAdversarial) != 1 || net_.output_dim(kClassification) != condition_dim_) {
        throw ShapeError("discriminator must map 3-vectors to a scalar head and a T_i-wide head");
    }
}

DiscriminatorNet DiscriminatorNet::create(std::size_t condition_dim, std::size_t hidden, std::uint64_t seed) {
    std::vector<nn::DenseLayer> trunk{
        nn::xavier_init(kCategories, hidden, derive_seed(seed, 0xd1, 0)),
        nn::xavier_init(hidden, hidden, derive_seed(seed, 0xd1, 1)),
    };
    std::vector<nn::Head> heads{
        {"adversarial", nn::xavier_init(hidden, 1, derive_seed(seed, 0xd1, 2)), nn::Activation::identity},
        {"classification", nn::xavier_init(hidden, condition_dim, derive_seed(seed, 0xd1, 3)),
         nn::Activation::identity},
    };
    nn::Network net(kCategories, std::move(trunk), {nn::Activation::relu, nn::Activation::relu}, std::move(heads));
    return DiscriminatorNet(std::move(net), condition_dim);
}

Matrix sample_noise(std::size_t count, std::size_t dim, Rng& rng) {
    if (count == 0 || dim == 0) {
        throw ShapeError("sample_noise requires count, dim >= 1");
    }
    std::normal_distribution<double> normal(0.0, 1.0);
    Matrix z(static_cast<Eigen::Index>(count), static_cast<Eigen::Index>(dim));
    for (Eigen::Index r = 0; r < z.rows(); ++r) {
        for (Eigen::Index c = 0; c < z.cols(); ++c) {
            z(r, c) = normal(rng);
        }
    }
    return z;
}

}  // namespace predacgan::gan
