#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace predacgan::nn {

// Batches are row-major in the logical sense: one sample per row.
using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

enum class Activation { identity, relu, softmax };

std::string_view to_string(Activation a);
Activation activation_from_string(std::string_view text);

struct DenseLayer {
    Matrix weight;  // fan_out x fan_in
    Vector bias;    // fan_out

    DenseLayer() = default;
    DenseLayer(std::size_t fan_in, std::size_t fan_out);

    std::size_t fan_in() const noexcept { return static_cast<std::size_t>(weight.cols()); }
    std::size_t fan_out() const noexcept { return static_cast<std::size_t>(weight.rows()); }
    std::size_t parameter_count() const noexcept { return fan_in() * fan_out() + fan_out(); }
    bool all_finite() const { return weight.allFinite() && bias.allFinite(); }
};

// Weights uniform in [-sqrt(6/(fan_in+fan_out)), +sqrt(6/(fan_in+fan_out))),
// bias zero. Deterministic for a fixed seed.
DenseLayer xavier_init(std::size_t fan_in, std::size_t fan_out, std::uint64_t seed);
double xavier_bound(std::size_t fan_in, std::size_t fan_out);

struct Head {
    std::string name;
    DenseLayer layer;
    Activation activation = Activation::identity;
};

// Copying a tag yields a fresh identity, so a cache recorded on one network
// is never accepted by a copy of it.
class InstanceTag {
public:
    InstanceTag();
    InstanceTag(const InstanceTag&);
    InstanceTag& operator=(const InstanceTag&);
    InstanceTag(InstanceTag&&) noexcept = default;
    InstanceTag& operator=(InstanceTag&&) noexcept = default;

    std::uint64_t value() const noexcept { return value_; }

private:
    std::uint64_t value_;
};

// A stack of dense trunk layers followed by zero or more named heads that all
// read the last trunk output. Without heads the last trunk layer is the
// single output, named "output".
class Network {
public:
    Network() = default;
    Network(std::size_t input_dim, std::vector<DenseLayer> trunk, std::vector<Activation> activations,
            std::vector<Head> heads = {});

    std::size_t input_dim() const noexcept { return input_dim_; }
    const std::vector<DenseLayer>& trunk() const noexcept { return trunk_; }
    const std::vector<Activation>& activations() const noexcept { return activations_; }
    const std::vector<Head>& heads() const noexcept { return heads_; }

    std::size_t output_count() const noexcept { return heads_.empty() ? 1 : heads_.size(); }
    std::vector<std::string> output_names() const;
    std::size_t output_index(std::string_view name) const;
    std::size_t output_dim(std::size_t output) const;

    // Flat parameter view: trunk layers first, then heads in order.
    std::size_t layer_count() const noexcept { return trunk_.size() + heads_.size(); }
    const DenseLayer& layer(std::size_t i) const;
    DenseLayer& mutable_layer(std::size_t i);
    std::string layer_name(std::size_t i) const;
    std::size_t parameter_count() const;

    std::uint64_t id() const noexcept { return tag_.value(); }
    std::uint64_t version() const noexcept { return version_; }
    // Invalidates outstanding forward caches after an in-place update.
    void mark_updated() noexcept { ++version_; }

private:
    void validate() const;

    std::size_t input_dim_ = 0;
    std::vector<DenseLayer> trunk_;
    std::vector<Activation> activations_;
    std::vector<Head> heads_;
    InstanceTag tag_;
    std::uint64_t version_ = 0;
};

struct ForwardCache {
    std::uint64_t network_id = 0;
    std::uint64_t network_version = 0;
    Matrix input;
    std::vector<Matrix> trunk_pre;
    std::vector<Matrix> trunk_post;
    std::vector<Matrix> head_pre;
    std::vector<Matrix> head_post;

    std::size_t batch_size() const noexcept { return static_cast<std::size_t>(input.rows()); }
};

struct ForwardResult {
    std::vector<Matrix> outputs;  // indexed like Network::output_names()
    ForwardCache cache;
};

ForwardResult forward(const Network& net, const Matrix& input);

// Same arithmetic as forward() without retaining intermediates.
std::vector<Matrix> evaluate(const Network& net, const Matrix& input);

// Gradients laid out like Network's flat parameter view.
struct Gradients {
    std::vector<DenseLayer> layers;
    Matrix input;  // d loss / d input, when requested

    static Gradients zeros_like(const Network& net);
    bool all_finite() const;
};

struct BackwardOptions {
    bool parameters = true;
    bool input = false;
};

// `output_grads` holds d loss / d output for each network output; an empty
// matrix stands for an all-zero gradient on that output.
Gradients backward(const Network& net, const ForwardCache& cache, std::span<const Matrix> output_grads,
                   BackwardOptions options = {});

// Row-wise softmax with max subtraction.
Matrix softmax_rows(const Matrix& logits);

}  // namespace predacgan::nn
