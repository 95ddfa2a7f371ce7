#include "predacgan/nn/network.hpp"

#include "predacgan/common/errors.hpp"

#include <atomic>
#include <cmath>
#include <random>

namespace predacgan::nn {

namespace {

std::atomic<std::uint64_t> next_instance{1};

Matrix affine(const Matrix& input, const DenseLayer& layer) {
    Matrix z = input * layer.weight.transpose();
    z.rowwise() += layer.bias.transpose();
    return z;
}

Matrix activate(const Matrix& pre, Activation a) {
    switch (a) {
        case Activation::identity:
            return pre;
        case Activation::relu:
            return pre.cwiseMax(0.0);
        case Activation::softmax:
            return softmax_rows(pre);
    }
    return pre;
}

// Converts d loss / d post into d loss / d pre.
Matrix activation_backward(const Matrix& grad_post, const Matrix& pre, const Matrix& post, Activation a) {
    switch (a) {
        case Activation::identity:
            return grad_post;
        case Activation::relu:
            return (pre.array() > 0.0).select(grad_post, 0.0);
        case Activation::softmax: {
            const Vector dot = (grad_post.array() * post.array()).rowwise().sum();
            Matrix centered = grad_post;
            centered.colwise() -= dot;
            return post.cwiseProduct(centered);
        }
    }
    return grad_post;
}

}  // namespace

std::string_view to_string(Activation a) {
    switch (a) {
        case Activation::identity:
            return "identity";
        case Activation::relu:
            return "relu";
        case Activation::softmax:
            return "softmax";
    }
    return "identity";
}

Activation activation_from_string(std::string_view text) {
    if (text == "identity") return Activation::identity;
    if (text == "relu") return Activation::relu;
    if (text == "softmax") return Activation::softmax;
    throw ShapeError("unknown activation tag '" + std::string(text) + "'");
}

DenseLayer::DenseLayer(std::size_t fan_in, std::size_t fan_out)
    : weight(Matrix::Zero(static_cast<Eigen::Index>(fan_out), static_cast<Eigen::Index>(fan_in))),
      bias(Vector::Zero(static_cast<Eigen::Index>(fan_out))) {}

double xavier_bound(std::size_t fan_in, std::size_t fan_out) {
    return std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
}

DenseLayer xavier_init(std::size_t fan_in, std::size_t fan_out, std::uint64_t seed) {
    if (fan_in == 0 || fan_out == 0) {
        throw ShapeError("xavier_init requires fan_in, fan_out >= 1");
    }
    DenseLayer layer(fan_in, fan_out);
    const double bound = xavier_bound(fan_in, fan_out);
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> dist(-bound, bound);
    for (Eigen::Index r = 0; r < layer.weight.rows(); ++r) {
        for (Eigen::Index c = 0; c < layer.weight.cols(); ++c) {
            layer.weight(r, c) = dist(rng);
        }
    }
    return layer;
}

InstanceTag::InstanceTag() : value_(next_instance.fetch_add(1)) {}
InstanceTag::InstanceTag(const InstanceTag&) : value_(next_instance.fetch_add(1)) {}
InstanceTag& InstanceTag::operator=(const InstanceTag&) {
    value_ = next_instance.fetch_add(1);
    return *this;
}

Network::Network(std::size_t input_dim, std::vector<DenseLayer> trunk, std::vector<Activation> activations,
                 std::vector<Head> heads)
    : input_dim_(input_dim),
      trunk_(std::move(trunk)),
      activations_(std::move(activations)),
      heads_(std::move(heads)) {
    validate();
}

void Network::validate() const {
    if (input_dim_ == 0) {
        throw ShapeError("network input dimension must be positive");
    }
    if (trunk_.size() != activations_.size()) {
        throw ShapeError("one activation tag per trunk layer required");
    }
    if (trunk_.empty() && heads_.empty()) {
        throw ShapeError("network needs at least one layer");
    }
    std::size_t width = input_dim_;
    for (std::size_t i = 0; i < trunk_.size(); ++i) {
        const auto& l = trunk_[i];
        if (l.fan_in() != width) {
            throw ShapeError("trunk layer " + std::to_string(i) + " expects fan_in " + std::to_string(width) +
                             ", has " + std::to_string(l.fan_in()));
        }
        if (static_cast<std::size_t>(l.bias.size()) != l.fan_out() || l.fan_out() == 0) {
            throw ShapeError("trunk layer " + std::to_string(i) + " bias length mismatch");
        }
        const bool last = i + 1 == trunk_.size();
        if (activations_[i] == Activation::softmax && (!last || !heads_.empty())) {
            throw ShapeError("softmax may only be the final activation");
        }
        width = l.fan_out();
    }
    for (const auto& h : heads_) {
        if (h.layer.fan_in() != width || static_cast<std::size_t>(h.layer.bias.size()) != h.layer.fan_out() ||
            h.layer.fan_out() == 0) {
            throw ShapeError("head '" + h.name + "' shape does not compose with the trunk");
        }
    }
    for (std::size_t i = 0; i < heads_.size(); ++i) {
        for (std::size_t j = i + 1; j < heads_.size(); ++j) {
            if (heads_[i].name == heads_[j].name) {
                throw ShapeError("duplicate head name '" + heads_[i].name + "'");
            }
        }
    }
}

std::vector<std::string> Network::output_names() const {
    if (heads_.empty()) {
        return {"output"};
    }
    std::vector<std::string> names;
    for (const auto& h : heads_) {
        names.push_back(h.name);
    }
    return names;
}

std::size_t Network::output_index(std::string_view name) const {
    const auto names = output_names();
    for (std::size_t i = 0; i < names.size(); ++i) {
        if (names[i] == name) {
            return i;
        }
    }
    throw ShapeError("network has no output named '" + std::string(name) + "'");
}

std::size_t Network::output_dim(std::size_t output) const {
    if (heads_.empty()) {
        return trunk_.back().fan_out();
    }
    return heads_.at(output).layer.fan_out();
}

const DenseLayer& Network::layer(std::size_t i) const {
    if (i < trunk_.size()) {
        return trunk_[i];
    }
    return heads_.at(i - trunk_.size()).layer;
}

DenseLayer& Network::mutable_layer(std::size_t i) {
    if (i < trunk_.size()) {
        return trunk_[i];
    }
    return heads_.at(i - trunk_.size()).layer;
}

std::string Network::layer_name(std::size_t i) const {
    if (i < trunk_.size()) {
        return "trunk[" + std::to_string(i) + "]";
    }
    return "head '" + heads_.at(i - trunk_.size()).name + "'";
}

std::size_t Network::parameter_count() const {
    std::size_t n = 0;
    for (std::size_t i = 0; i < layer_count(); ++i) {
        n += layer(i).parameter_count();
    }
    return n;
}

Matrix softmax_rows(const Matrix& logits) {
    Matrix out = logits;
    out.colwise() -= logits.rowwise().maxCoeff();
    out = out.array().exp().matrix();
    const Vector sums = out.rowwise().sum();
    out.array().colwise() /= sums.array();
    return out;
}

ForwardResult forward(const Network& net, const Matrix& input) {
    if (static_cast<std::size_t>(input.cols()) != net.input_dim()) {
        throw ShapeError("input has " + std::to_string(input.cols()) + " columns, network expects " +
                         std::to_string(net.input_dim()));
    }
    ForwardResult result;
    auto& cache = result.cache;
    cache.network_id = net.id();
    cache.network_version = net.version();
    cache.input = input;

    const Matrix* current = &cache.input;
    for (std::size_t i = 0; i < net.trunk().size(); ++i) {
        cache.trunk_pre.push_back(affine(*current, net.trunk()[i]));
        cache.trunk_post.push_back(activate(cache.trunk_pre.back(), net.activations()[i]));
        current = &cache.trunk_post.back();
    }
    if (net.heads().empty()) {
        result.outputs.push_back(cache.trunk_post.back());
        return result;
    }
    for (const auto& h : net.heads()) {
        cache.head_pre.push_back(affine(*current, h.layer));
        cache.head_post.push_back(activate(cache.head_pre.back(), h.activation));
        result.outputs.push_back(cache.head_post.back());
    }
    return result;
}

std::vector<Matrix> evaluate(const Network& net, const Matrix& input) {
    if (static_cast<std::size_t>(input.cols()) != net.input_dim()) {
        throw ShapeError("input has " + std::to_string(input.cols()) + " columns, network expects " +
                         std::to_string(net.input_dim()));
    }
    Matrix current = input;
    for (std::size_t i = 0; i < net.trunk().size(); ++i) {
        current = activate(affine(current, net.trunk()[i]), net.activations()[i]);
    }
    if (net.heads().empty()) {
        return {std::move(current)};
    }
    std::vector<Matrix> outputs;
    for (const auto& h : net.heads()) {
        outputs.push_back(activate(affine(current, h.layer), h.activation));
    }
    return outputs;
}

Gradients Gradients::zeros_like(const Network& net) {
    Gradients g;
    for (std::size_t i = 0; i < net.layer_count(); ++i) {
        g.layers.emplace_back(net.layer(i).fan_in(), net.layer(i).fan_out());
    }
    return g;
}

bool Gradients::all_finite() const {
    for (const auto& l : layers) {
        if (!l.all_finite()) {
            return false;
        }
    }
    return input.allFinite();
}

Gradients backward(const Network& net, const ForwardCache& cache, std::span<const Matrix> output_grads,
                   BackwardOptions options) {
    if (cache.network_id != net.id() || cache.network_version != net.version()) {
        throw CacheError("forward cache is stale or belongs to another network");
    }
    if (cache.trunk_pre.size() != net.trunk().size() || cache.head_pre.size() != net.heads().size()) {
        throw CacheError("forward cache layout does not match the network");
    }
    if (output_grads.size() != net.output_count()) {
        throw ShapeError("expected " + std::to_string(net.output_count()) + " output gradients, got " +
                         std::to_string(output_grads.size()));
    }
    const auto batch = static_cast<Eigen::Index>(cache.batch_size());
    for (std::size_t o = 0; o < output_grads.size(); ++o) {
        const auto& g = output_grads[o];
        if (g.size() == 0) {
            continue;
        }
        if (g.rows() != batch || static_cast<std::size_t>(g.cols()) != net.output_dim(o)) {
            throw ShapeError("output gradient " + std::to_string(o) + " has wrong shape");
        }
    }

    Gradients grads;
    if (options.parameters) {
        grads = Gradients::zeros_like(net);
    }

    const std::size_t n_trunk = net.trunk().size();
    auto trunk_input = [&](std::size_t i) -> const Matrix& {
        return i == 0 ? cache.input : cache.trunk_post[i - 1];
    };

    // Gradient w.r.t. the output of the last trunk layer (or the input when
    // the network is heads-only).
    Matrix upstream;
    bool have_upstream = false;
    const Matrix& head_input = n_trunk == 0 ? cache.input : cache.trunk_post.back();

    if (net.heads().empty()) {
        if (output_grads[0].size() != 0) {
            upstream = output_grads[0];
            have_upstream = true;
        }
    } else {
        upstream = Matrix::Zero(batch, head_input.cols());
        for (std::size_t h = 0; h < net.heads().size(); ++h) {
            const auto& g = output_grads[h];
            if (g.size() == 0) {
                continue;
            }
            const auto& head = net.heads()[h];
            const Matrix dz = activation_backward(g, cache.head_pre[h], cache.head_post[h], head.activation);
            if (options.parameters) {
                auto& out = grads.layers[n_trunk + h];
                out.weight.noalias() = dz.transpose() * head_input;
                out.bias = dz.colwise().sum().transpose();
            }
            upstream.noalias() += dz * head.layer.weight;
            have_upstream = true;
        }
    }

    if (!have_upstream) {
        if (options.input) {
            grads.input = Matrix::Zero(batch, static_cast<Eigen::Index>(net.input_dim()));
        }
        return grads;
    }

    for (std::size_t k = n_trunk; k-- > 0;) {
        const auto& layer = net.trunk()[k];
        const Matrix dz = activation_backward(upstream, cache.trunk_pre[k], cache.trunk_post[k], net.activations()[k]);
        if (options.parameters) {
            auto& out = grads.layers[k];
            out.weight.noalias() = dz.transpose() * trunk_input(k);
            out.bias = dz.colwise().sum().transpose();
        }
        if (k > 0 || options.input) {
            upstream = dz * layer.weight;
        }
    }
    if (options.input) {
        grads.input = std::move(upstream);
    }
    return grads;
}

}  // namespace predacgan::nn
