#pragma once

#include "predacgan/data/dataset.hpp"
#include "predacgan/gan/losses.hpp"
#include "predacgan/gan/model.hpp"
#include "predacgan/nn/optimizer.hpp"

#include <functional>
#include <span>
#include <vector>

namespace predacgan::gan {

struct EpochLoss {
    std::size_t epoch = 0;  // 1-based
    double d_loss = 0.0;    // mean over the epoch's mini-batches
    double g_loss = 0.0;
    double lr_d = 0.0;      // learning rates in effect during the epoch
    double lr_g = 0.0;
};

using LossTrace = std::vector<EpochLoss>;

// Called on the training thread after each epoch.
using ProgressSink = std::function<void(const EpochLoss&)>;

// Training set in matrix form: row i of `conditions` is X_i, row i of
// `categories` its one-hot label.
struct TrainingMatrices {
    Matrix conditions;
    Matrix categories;

    static TrainingMatrices from_pairs(std::span<const data::TrainingPair> pairs);
    std::size_t size() const noexcept { return static_cast<std::size_t>(conditions.rows()); }
};

// Owns both networks and their optimizer states. Each mini-batch runs one
// discriminator update at lr_d followed by one generator update at lr_g,
// with fresh noise for each.
class Trainer {
public:
    Trainer(std::size_t condition_dim, const TrainConfig& config);
    Trainer(GeneratorNet generator, DiscriminatorNet discriminator, const TrainConfig& config);

    DiscriminatorLoss discriminator_step(const Matrix& x, const Matrix& real_onehot);
    GeneratorLoss generator_step(const Matrix& x);

    // Shuffles with the trainer's rng and sweeps all full mini-batches.
    EpochLoss run_epoch(const TrainingMatrices& data);

    const GeneratorNet& generator() const noexcept { return generator_; }
    const DiscriminatorNet& discriminator() const noexcept { return discriminator_; }
    const TrainConfig& config() const noexcept { return config_; }
    std::size_t epochs_completed() const noexcept { return epochs_completed_; }
    const nn::AdamState& generator_optimizer() const noexcept { return adam_g_; }
    const nn::AdamState& discriminator_optimizer() const noexcept { return adam_d_; }

    GeneratorNet release_generator() && { return std::move(generator_); }
    DiscriminatorNet release_discriminator() && { return std::move(discriminator_); }

private:
    TrainConfig config_;
    GeneratorNet generator_;
    DiscriminatorNet discriminator_;
    nn::AdamState adam_g_;
    nn::AdamState adam_d_;
    Rng rng_;
    std::size_t epochs_completed_ = 0;
};

struct TrainResult {
    GeneratorNet generator;
    DiscriminatorNet discriminator;
    LossTrace trace;
};

// Throws DataError for an empty set, ragged conditions or fewer pairs than
// one batch; DivergenceError when a loss or gradient turns non-finite.
TrainResult train(std::span<const data::TrainingPair> pairs, const TrainConfig& config,
                  const ProgressSink& progress = {});

}  // namespace predacgan::gan
