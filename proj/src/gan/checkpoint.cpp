#include "predacgan/gan/checkpoint.hpp"

#include "predacgan/common/csv.hpp"
#include "predacgan/common/errors.hpp"
#include "predacgan/nn/serialization.hpp"

#include <fstream>

namespace predacgan::gan {

nlohmann::json to_json(const TrainConfig& c) {
    return nlohmann::json{
        {"lr_d", c.lr_d},
        {"lr_g", c.lr_g},
        {"beta1", c.beta1},
        {"beta2", c.beta2},
        {"adam_epsilon", c.adam_epsilon},
        {"lambda_cg", c.lambda_cg},
        {"lambda_cd", c.lambda_cd},
        {"batch_size", c.batch_size},
        {"epochs", c.epochs},
        {"noise_dim", c.noise_dim},
        {"generator_hidden", c.generator_hidden},
        {"discriminator_hidden", c.discriminator_hidden},
        {"rng_seed", c.rng_seed},
    };
}

TrainConfig train_config_from_json(const nlohmann::json& j) {
    TrainConfig c;
    c.lr_d = j.at("lr_d").get<double>();
    c.lr_g = j.at("lr_g").get<double>();
    c.beta1 = j.at("beta1").get<double>();
    c.beta2 = j.at("beta2").get<double>();
    c.adam_epsilon = j.at("adam_epsilon").get<double>();
    c.lambda_cg = j.at("lambda_cg").get<double>();
    c.lambda_cd = j.at("lambda_cd").get<double>();
    c.batch_size = j.at("batch_size").get<std::size_t>();
    c.epochs = j.at("epochs").get<std::size_t>();
    c.noise_dim = j.at("noise_dim").get<std::size_t>();
    c.generator_hidden = j.at("generator_hidden").get<std::size_t>();
    c.discriminator_hidden = j.at("discriminator_hidden").get<std::size_t>();
    c.rng_seed = j.at("rng_seed").get<std::uint64_t>();
    return c;
}

void save_checkpoint(const Checkpoint& cp, const std::filesystem::path& path) {
    nlohmann::json doc;
    doc["format_version"] = kCheckpointFormatVersion;
    doc["epoch"] = cp.epoch;
    doc["noise_dim"] = cp.generator.noise_dim();
    doc["condition_dim"] = cp.generator.condition_dim();
    doc["train_config"] = to_json(cp.config);
    doc["generator"] = nn::to_json(cp.generator.network());
    doc["discriminator"] = nn::to_json(cp.discriminator.network());
    auto out = csv::open_output(path);
    out << doc.dump() << '\n';
    if (!out) {
        throw IoError("write failed for " + path.string());
    }
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot open checkpoint " + path.string());
    }
    try {
        nlohmann::json doc;
        in >> doc;
        if (doc.at("format_version").get<int>() != kCheckpointFormatVersion) {
            throw DataError("unsupported checkpoint format_version");
        }
        const auto noise_dim = doc.at("noise_dim").get<std::size_t>();
        const auto condition_dim = doc.at("condition_dim").get<std::size_t>();
        return Checkpoint{
            GeneratorNet(nn::network_from_json(doc.at("generator")), noise_dim, condition_dim),
            DiscriminatorNet(nn::network_from_json(doc.at("discriminator")), condition_dim),
            train_config_from_json(doc.at("train_config")),
            doc.at("epoch").get<std::size_t>(),
        };
    } catch (const nlohmann::json::exception& e) {
        throw DataError("malformed checkpoint " + path.string() + ": " + e.what());
    }
}

void write_loss_trace(const LossTrace& trace, const std::filesystem::path& path) {
    auto out = csv::open_output(path);
    out << "epoch,d_loss,g_loss\n";
    for (const auto& e : trace) {
        out << e.epoch << ',' << csv::format_real(e.d_loss) << ',' << csv::format_real(e.g_loss) << '\n';
    }
    if (!out) {
        throw IoError("write failed for " + path.string());
    }
}

}  // namespace predacgan::gan
