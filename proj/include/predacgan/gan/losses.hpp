#pragma once

#include "predacgan/gan/model.hpp"
#include "predacgan/nn/network.hpp"

#include <vector>

namespace predacgan::gan {

// Discriminator objective (minimized):
//   mean max(0, 1 - D(real)) + lambda_cD * mean ||D_c(real) - X||^2
//   + mean max(0, 1 + D(fake))
// The squared error is averaged over the batch and the T_i coordinates.
struct DiscriminatorLoss {
    double real_hinge = 0.0;
    double classification = 0.0;
    double fake_hinge = 0.0;
    double total = 0.0;
};

// Generator objective (minimized; the negation of the maximized form):
//   -mean D(G(z, X)) + lambda_cG * mean ||D_c(G(z, X)) - X||^2
struct GeneratorLoss {
    double adversarial = 0.0;
    double classification = 0.0;
    double total = 0.0;
};

// Loss on discriminator head values together with d loss / d head output.
// `adversarial` and `classification` stack the real rows first, then the
// fake rows; `x` holds the conditions of the real rows.
struct DiscriminatorHeadLoss {
    DiscriminatorLoss loss;
    std::vector<Matrix> output_grads;  // {adversarial, classification}
};
DiscriminatorHeadLoss discriminator_head_loss(const Matrix& adversarial, const Matrix& classification,
                                              const Matrix& x, std::size_t real_rows, double lambda_cd);

struct GeneratorHeadLoss {
    GeneratorLoss loss;
    std::vector<Matrix> output_grads;  // {adversarial, classification}
};
GeneratorHeadLoss generator_head_loss(const Matrix& adversarial, const Matrix& classification, const Matrix& x,
                                      double lambda_cg);

// Throws DataError unless every row has exactly one entry equal to 1 and
// the rest equal to 0.
void require_one_hot_rows(const Matrix& rows);

// Real rows are validated one-hot vectors. `fake_probs` enters as a constant:
// no gradient reaches the generator from this loss.
DiscriminatorLoss discriminator_loss(const DiscriminatorNet& d, const Matrix& real_onehot, const Matrix& x,
                                     const Matrix& fake_probs, double lambda_cd);

struct DiscriminatorGradient {
    DiscriminatorLoss loss;
    nn::Gradients grads;  // discriminator parameters only
};
DiscriminatorGradient discriminator_loss_grad(const DiscriminatorNet& d, const Matrix& real_onehot,
                                              const Matrix& x, const Matrix& fake_probs, double lambda_cd);

GeneratorLoss generator_loss(const Matrix& z, const Matrix& x, const GeneratorNet& g, const DiscriminatorNet& d,
                             double lambda_cg);

struct GeneratorGradient {
    GeneratorLoss loss;
    nn::Gradients grads;  // generator parameters only; D is held fixed
};
GeneratorGradient generator_loss_grad(const Matrix& z, const Matrix& x, const GeneratorNet& g,
                                      const DiscriminatorNet& d, double lambda_cg);

}  // namespace predacgan::gan
