#include "predacgan/gan/losses.hpp"

#include "predacgan/common/errors.hpp"

#include <array>

namespace predacgan::gan {

namespace {

void check_condition_shape(const Matrix& classification_rows, const Matrix& x) {
    if (classification_rows.rows() != x.rows() || classification_rows.cols() != x.cols()) {
        throw ShapeError("classification head output and condition X differ in shape");
    }
}

Matrix stack_rows(const Matrix& top, const Matrix& bottom) {
    Matrix out(top.rows() + bottom.rows(), top.cols());
    out << top, bottom;
    return out;
}

}  // namespace

DiscriminatorHeadLoss discriminator_head_loss(const Matrix& adversarial, const Matrix& classification,
                                              const Matrix& x, std::size_t real_rows, double lambda_cd) {
    const auto n_real = static_cast<Eigen::Index>(real_rows);
    const Eigen::Index n_fake = adversarial.rows() - n_real;
    if (n_real < 1 || n_fake < 1 || adversarial.cols() != 1 || classification.rows() != adversarial.rows()) {
        throw ShapeError("discriminator head outputs must stack real and fake rows");
    }
    const Matrix cls_real = classification.topRows(n_real);
    check_condition_shape(cls_real, x);

    DiscriminatorHeadLoss out;
    Matrix adv_grad = Matrix::Zero(adversarial.rows(), 1);
    Matrix cls_grad = Matrix::Zero(classification.rows(), classification.cols());

    for (Eigen::Index i = 0; i < n_real; ++i) {
        const double margin = 1.0 - adversarial(i, 0);
        if (margin > 0.0) {
            out.loss.real_hinge += margin;
            adv_grad(i, 0) = -1.0 / static_cast<double>(n_real);
        }
    }
    out.loss.real_hinge /= static_cast<double>(n_real);

    for (Eigen::Index i = 0; i < n_fake; ++i) {
        const double margin = 1.0 + adversarial(n_real + i, 0);
        if (margin > 0.0) {
            out.loss.fake_hinge += margin;
            adv_grad(n_real + i, 0) = 1.0 / static_cast<double>(n_fake);
        }
    }
    out.loss.fake_hinge /= static_cast<double>(n_fake);

    const Matrix diff = cls_real - x;
    const double count = static_cast<double>(diff.size());
    out.loss.classification = diff.squaredNorm() / count;
    cls_grad.topRows(n_real) = (2.0 * lambda_cd / count) * diff;

    out.loss.total = out.loss.real_hinge + lambda_cd * out.loss.classification + out.loss.fake_hinge;
    out.output_grads = {std::move(adv_grad), std::move(cls_grad)};
    return out;
}

GeneratorHeadLoss generator_head_loss(const Matrix& adversarial, const Matrix& classification, const Matrix& x,
                                      double lambda_cg) {
    if (adversarial.cols() != 1 || adversarial.rows() != classification.rows() || adversarial.rows() < 1) {
        throw ShapeError("generator loss expects one adversarial value per row");
    }
    check_condition_shape(classification, x);
    const auto batch = static_cast<double>(adversarial.rows());

    GeneratorHeadLoss out;
    out.loss.adversarial = -adversarial.mean();
    const Matrix diff = classification - x;
    const double count = static_cast<double>(diff.size());
    out.loss.classification = diff.squaredNorm() / count;
    out.loss.total = out.loss.adversarial + lambda_cg * out.loss.classification;
    out.output_grads = {Matrix::Constant(adversarial.rows(), 1, -1.0 / batch), (2.0 * lambda_cg / count) * diff};
    return out;
}

void require_one_hot_rows(const Matrix& rows) {
    if (rows.cols() != static_cast<Eigen::Index>(kCategories)) {
        throw DataError("real category rows must have 3 columns");
    }
    for (Eigen::Index r = 0; r < rows.rows(); ++r) {
        int ones = 0;
        for (Eigen::Index c = 0; c < rows.cols(); ++c) {
            const double v = rows(r, c);
            if (v == 1.0) {
                ++ones;
            } else if (v != 0.0) {
                ones = -1;
                break;
            }
        }
        if (ones != 1) {
            throw DataError("real category row " + std::to_string(r) + " is not one-hot");
        }
    }
}

DiscriminatorGradient discriminator_loss_grad(const DiscriminatorNet& d, const Matrix& real_onehot,
                                              const Matrix& x, const Matrix& fake_probs, double lambda_cd) {
    require_one_hot_rows(real_onehot);
    if (fake_probs.cols() != static_cast<Eigen::Index>(kCategories) || real_onehot.rows() != x.rows()) {
        throw ShapeError("discriminator batches are not aligned");
    }
    const auto fwd = nn::forward(d.network(), stack_rows(real_onehot, fake_probs));
    auto head = discriminator_head_loss(fwd.outputs[DiscriminatorNet::kAdversarial],
                                        fwd.outputs[DiscriminatorNet::kClassification], x,
                                        static_cast<std::size_t>(real_onehot.rows()), lambda_cd);
    DiscriminatorGradient out;
    out.loss = head.loss;
    out.grads = nn::backward(d.network(), fwd.cache, head.output_grads);
    return out;
}

DiscriminatorLoss discriminator_loss(const DiscriminatorNet& d, const Matrix& real_onehot, const Matrix& x,
                                     const Matrix& fake_probs, double lambda_cd) {
    require_one_hot_rows(real_onehot);
    if (fake_probs.cols() != static_cast<Eigen::Index>(kCategories) || real_onehot.rows() != x.rows()) {
        throw ShapeError("discriminator batches are not aligned");
    }
    const auto outputs = nn::evaluate(d.network(), stack_rows(real_onehot, fake_probs));
    return discriminator_head_loss(outputs[DiscriminatorNet::kAdversarial],
                                   outputs[DiscriminatorNet::kClassification], x,
                                   static_cast<std::size_t>(real_onehot.rows()), lambda_cd)
        .loss;
}

GeneratorLoss generator_loss(const Matrix& z, const Matrix& x, const GeneratorNet& g, const DiscriminatorNet& d,
                             double lambda_cg) {
    const Matrix fake = g.probabilities(z, x);
    const auto outputs = nn::evaluate(d.network(), fake);
    return generator_head_loss(outputs[DiscriminatorNet::kAdversarial],
                               outputs[DiscriminatorNet::kClassification], x, lambda_cg)
        .loss;
}

GeneratorGradient generator_loss_grad(const Matrix& z, const Matrix& x, const GeneratorNet& g,
                                      const DiscriminatorNet& d, double lambda_cg) {
    const auto g_fwd = nn::forward(g.network(), g.join_inputs(z, x));
    const Matrix& fake = g_fwd.outputs.front();
    const auto d_fwd = nn::forward(d.network(), fake);
    auto head = generator_head_loss(d_fwd.outputs[DiscriminatorNet::kAdversarial],
                                    d_fwd.outputs[DiscriminatorNet::kClassification], x, lambda_cg);
    const auto through_d = nn::backward(d.network(), d_fwd.cache, head.output_grads,
                                        nn::BackwardOptions{.parameters = false, .input = true});
    const std::array<Matrix, 1> fake_grad{through_d.input};
    GeneratorGradient out;
    out.loss = head.loss;
    out.grads = nn::backward(g.network(), g_fwd.cache, fake_grad);
    return out;
}

}  // namespace predacgan::gan
