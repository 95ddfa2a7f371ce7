#include "predacgan/gan/trainer.hpp"

#include "predacgan/common/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace predacgan::gan {

namespace {

nn::AdamConfig adam_config(const TrainConfig& c, double lr) {
    return nn::AdamConfig{lr, c.beta1, c.beta2, c.adam_epsilon};
}

Matrix gather_rows(const Matrix& source, std::span<const std::size_t> rows) {
    Matrix out(static_cast<Eigen::Index>(rows.size()), source.cols());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        out.row(static_cast<Eigen::Index>(i)) = source.row(static_cast<Eigen::Index>(rows[i]));
    }
    return out;
}

}  // namespace

TrainingMatrices TrainingMatrices::from_pairs(std::span<const data::TrainingPair> pairs) {
    if (pairs.empty()) {
        throw DataError("training set is empty");
    }
    const std::size_t width = pairs.front().x.values.size();
    if (width == 0) {
        throw DataError("training conditions are empty");
    }
    TrainingMatrices m;
    m.conditions.resize(static_cast<Eigen::Index>(pairs.size()), static_cast<Eigen::Index>(width));
    m.categories = Matrix::Zero(static_cast<Eigen::Index>(pairs.size()), static_cast<Eigen::Index>(kCategories));
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        const auto& p = pairs[i];
        if (p.x.values.size() != width) {
            throw DataError("condition length differs at pair " + std::to_string(i) + " (" + p.asset_id + ")");
        }
        for (std::size_t j = 0; j < width; ++j) {
            m.conditions(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = p.x.values[j];
        }
        m.categories(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(data::index_of(p.c))) = 1.0;
    }
    return m;
}

Trainer::Trainer(std::size_t condition_dim, const TrainConfig& config)
    : Trainer(GeneratorNet::create(config.noise_dim, condition_dim, config.generator_hidden,
                                   derive_seed(config.rng_seed, 0x47)),
              DiscriminatorNet::create(condition_dim, config.discriminator_hidden,
                                       derive_seed(config.rng_seed, 0x44)),
              config) {}

Trainer::Trainer(GeneratorNet generator, DiscriminatorNet discriminator, const TrainConfig& config)
    : config_(config),
      generator_(std::move(generator)),
      discriminator_(std::move(discriminator)),
      adam_g_(nn::AdamState::for_network(generator_.network(), adam_config(config, config.lr_g))),
      adam_d_(nn::AdamState::for_network(discriminator_.network(), adam_config(config, config.lr_d))),
      rng_(derive_seed(config.rng_seed, 0x7a)) {
    config_.validate();
    if (generator_.condition_dim() != discriminator_.condition_dim()) {
        throw ShapeError("generator and discriminator disagree on the condition width");
    }
    if (generator_.noise_dim() != config_.noise_dim) {
        throw ShapeError("generator noise width differs from config.noise_dim");
    }
}

DiscriminatorLoss Trainer::discriminator_step(const Matrix& x, const Matrix& real_onehot) {
    const Matrix z = sample_noise(static_cast<std::size_t>(x.rows()), config_.noise_dim, rng_);
    const Matrix fake = generator_.probabilities(z, x);
    auto step = discriminator_loss_grad(discriminator_, real_onehot, x, fake, config_.lambda_cd);
    nn::adam_step(discriminator_.network(), step.grads, adam_d_);
    return step.loss;
}

GeneratorLoss Trainer::generator_step(const Matrix& x) {
    const Matrix z = sample_noise(static_cast<std::size_t>(x.rows()), config_.noise_dim, rng_);
    auto step = generator_loss_grad(z, x, generator_, discriminator_, config_.lambda_cg);
    nn::adam_step(generator_.network(), step.grads, adam_g_);
    return step.loss;
}

EpochLoss Trainer::run_epoch(const TrainingMatrices& data) {
    const std::size_t n = data.size();
    const std::size_t batch = config_.batch_size;
    if (n < batch) {
        throw DataError("need at least batch_size (" + std::to_string(batch) + ") training pairs, have " +
                        std::to_string(n));
    }
    if (static_cast<std::size_t>(data.conditions.cols()) != generator_.condition_dim()) {
        throw ShapeError("training conditions do not match the generator's condition width");
    }
    const std::size_t epoch = epochs_completed_ + 1;

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::shuffle(order.begin(), order.end(), rng_);

    double d_sum = 0.0;
    double g_sum = 0.0;
    const std::size_t batches = n / batch;
    for (std::size_t b = 0; b < batches; ++b) {
        const std::span<const std::size_t> rows(order.data() + b * batch, batch);
        const Matrix x = gather_rows(data.conditions, rows);
        const Matrix onehot = gather_rows(data.categories, rows);
        try {
            const auto d_loss = discriminator_step(x, onehot);
            const auto g_loss = generator_step(x);
            if (!std::isfinite(d_loss.total) || !std::isfinite(g_loss.total)) {
                throw DivergenceError(epoch, "non-finite loss in batch " + std::to_string(b));
            }
            d_sum += d_loss.total;
            g_sum += g_loss.total;
        } catch (const DivergenceError&) {
            throw;
        } catch (const NumericError& e) {
            throw DivergenceError(epoch, e.what());
        }
    }
    epochs_completed_ = epoch;
    return EpochLoss{epoch, d_sum / static_cast<double>(batches), g_sum / static_cast<double>(batches),
                     adam_d_.config.learning_rate, adam_g_.config.learning_rate};
}

TrainResult train(std::span<const data::TrainingPair> pairs, const TrainConfig& config,
                  const ProgressSink& progress) {
    config.validate();
    const auto data = TrainingMatrices::from_pairs(pairs);
    if (data.size() < config.batch_size) {
        throw DataError("need at least batch_size (" + std::to_string(config.batch_size) +
                        ") training pairs, have " + std::to_string(data.size()));
    }
    Trainer trainer(static_cast<std::size_t>(data.conditions.cols()), config);
    LossTrace trace;
    trace.reserve(config.epochs);
    for (std::size_t e = 0; e < config.epochs; ++e) {
        trace.push_back(trainer.run_epoch(data));
        if (progress) {
            progress(trace.back());
        }
    }
    auto generator = std::move(trainer).release_generator();
    auto discriminator = std::move(trainer).release_discriminator();
    return TrainResult{std::move(generator), std::move(discriminator), std::move(trace)};
}

}  // namespace predacgan::gan
