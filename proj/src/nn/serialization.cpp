#include "predacgan/nn/serialization.hpp"

#include "predacgan/common/csv.hpp"
#include "predacgan/common/errors.hpp"

#include <fstream>

namespace predacgan::nn {

namespace {

nlohmann::json layer_json(const DenseLayer& layer, Activation activation) {
    nlohmann::json j;
    j["fan_in"] = layer.fan_in();
    j["fan_out"] = layer.fan_out();
    j["activation"] = std::string(to_string(activation));
    std::vector<double> weight;
    weight.reserve(layer.fan_in() * layer.fan_out());
    for (Eigen::Index r = 0; r < layer.weight.rows(); ++r) {
        for (Eigen::Index c = 0; c < layer.weight.cols(); ++c) {
            weight.push_back(layer.weight(r, c));
        }
    }
    j["weight"] = std::move(weight);
    j["bias"] = std::vector<double>(layer.bias.data(), layer.bias.data() + layer.bias.size());
    return j;
}

DenseLayer layer_from_json(const nlohmann::json& j) {
    const auto fan_in = j.at("fan_in").get<std::size_t>();
    const auto fan_out = j.at("fan_out").get<std::size_t>();
    const auto weight = j.at("weight").get<std::vector<double>>();
    const auto bias = j.at("bias").get<std::vector<double>>();
    if (weight.size() != fan_in * fan_out || bias.size() != fan_out) {
        throw ShapeError("serialized layer arrays do not match declared dims");
    }
    DenseLayer layer(fan_in, fan_out);
    std::size_t k = 0;
    for (std::size_t r = 0; r < fan_out; ++r) {
        for (std::size_t c = 0; c < fan_in; ++c) {
            layer.weight(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = weight[k++];
        }
    }
    for (std::size_t r = 0; r < fan_out; ++r) {
        layer.bias(static_cast<Eigen::Index>(r)) = bias[r];
    }
    return layer;
}

}  // namespace

nlohmann::json to_json(const Network& net) {
    nlohmann::json doc;
    doc["format_version"] = kNetworkFormatVersion;
    doc["input_dim"] = net.input_dim();
    doc["trunk"] = nlohmann::json::array();
    for (std::size_t i = 0; i < net.trunk().size(); ++i) {
        doc["trunk"].push_back(layer_json(net.trunk()[i], net.activations()[i]));
    }
    doc["heads"] = nlohmann::json::array();
    for (const auto& h : net.heads()) {
        auto j = layer_json(h.layer, h.activation);
        j["name"] = h.name;
        doc["heads"].push_back(std::move(j));
    }
    return doc;
}

Network network_from_json(const nlohmann::json& doc) {
    try {
        const int version = doc.at("format_version").get<int>();
        if (version != kNetworkFormatVersion) {
            throw ShapeError("unsupported network format_version " + std::to_string(version));
        }
        std::vector<DenseLayer> trunk;
        std::vector<Activation> activations;
        for (const auto& j : doc.at("trunk")) {
            trunk.push_back(layer_from_json(j));
            activations.push_back(activation_from_string(j.at("activation").get<std::string>()));
        }
        std::vector<Head> heads;
        for (const auto& j : doc.at("heads")) {
            heads.push_back(Head{j.at("name").get<std::string>(), layer_from_json(j),
                                 activation_from_string(j.at("activation").get<std::string>())});
        }
        return Network(doc.at("input_dim").get<std::size_t>(), std::move(trunk), std::move(activations),
                       std::move(heads));
    } catch (const nlohmann::json::exception& e) {
        throw ShapeError(std::string("malformed network JSON: ") + e.what());
    }
}

void save_network(const Network& net, const std::filesystem::path& path) {
    auto out = csv::open_output(path);
    out << to_json(net).dump() << '\n';
}

Network load_network(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot open " + path.string());
    }
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::exception& e) {
        throw ShapeError(std::string("malformed network JSON: ") + e.what());
    }
    return network_from_json(doc);
}

}  // namespace predacgan::nn
