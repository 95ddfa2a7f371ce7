#pragma once

#include "predacgan/gan/model.hpp"
#include "predacgan/gan/trainer.hpp"

#include <json.hpp>

#include <filesystem>

namespace predacgan::gan {

inline constexpr int kCheckpointFormatVersion = 1;

struct Checkpoint {
    GeneratorNet generator;
    DiscriminatorNet discriminator;
    TrainConfig config;
    std::size_t epoch = 0;  // completed epochs
};

nlohmann::json to_json(const TrainConfig& config);
TrainConfig train_config_from_json(const nlohmann::json& j);

// {"format_version", "epoch", "noise_dim", "condition_dim", "train_config",
//  "generator": <network>, "discriminator": <network>}
void save_checkpoint(const Checkpoint& checkpoint, const std::filesystem::path& path);
Checkpoint load_checkpoint(const std::filesystem::path& path);

// epoch,d_loss,g_loss
void write_loss_trace(const LossTrace& trace, const std::filesystem::path& path);

}  // namespace predacgan::gan
