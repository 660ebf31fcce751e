#include "nids/nn.hpp"

#include <algorithm>
#include <cmath>

#include "nids/errors.hpp"
#include "nids/rng.hpp"

namespace nids {

std::string to_string(ActivationKind k) {
    switch (k) {
        case ActivationKind::Sigmoid: return "sigmoid";
        case ActivationKind::Tanh: return "tanh";
        case ActivationKind::Relu: return "relu";
        case ActivationKind::Identity: return "identity";
    }
    return "?";
}

ActivationKind activation_from_string(const std::string& name) {
    if (name == "sigmoid") return ActivationKind::Sigmoid;
    if (name == "tanh") return ActivationKind::Tanh;
    if (name == "relu") return ActivationKind::Relu;
    if (name == "identity") return ActivationKind::Identity;
    throw ConfigError("unknown activation: " + name);
}

double apply_activation(ActivationKind k, double z) {
    switch (k) {
        case ActivationKind::Sigmoid: return 1.0 / (1.0 + std::exp(-z));
        case ActivationKind::Tanh: return std::tanh(z);
        case ActivationKind::Relu: return z > 0.0 ? z : 0.0;
        case ActivationKind::Identity: return z;
    }
    return z;
}

double activation_derivative_from_output(ActivationKind k, double a) {
    switch (k) {
        case ActivationKind::Sigmoid: return a * (1.0 - a);
        case ActivationKind::Tanh: return 1.0 - a * a;
        case ActivationKind::Relu: return a > 0.0 ? 1.0 : 0.0;
        case ActivationKind::Identity: return 1.0;
    }
    return 1.0;
}

Tensor2 glorot_init(int in_dim, int out_dim, std::uint64_t seed) {
    const double bound = std::sqrt(6.0 / (in_dim + out_dim));
    Rng rng(seed);
    Tensor2 t(in_dim, out_dim);
    for (double& v : t.data) v = rng.next_uniform(-bound, bound);
    return t;
}

DenseLayer make_dense_layer(int in_dim, int out_dim, ActivationKind act, std::uint64_t seed) {
    DenseLayer layer;
    layer.weights = glorot_init(in_dim, out_dim, seed);
    layer.bias.assign(static_cast<std::size_t>(out_dim), 0.0);
    layer.activation = act;
    return layer;
}

Tensor2 dense_forward(const DenseLayer& layer, const Tensor2& x) {
    if (x.cols != layer.in_dim()) {
        throw DimensionMismatchError("dense_forward: input width " + std::to_string(x.cols) +
                                     " vs layer in_dim " + std::to_string(layer.in_dim()));
    }
    Tensor2 out = matmul(x, layer.weights);
    add_row_vector(out, layer.bias);
    if (layer.activation != ActivationKind::Identity) {
        for (double& v : out.data) v = apply_activation(layer.activation, v);
    }
    return out;
}

Tensor2 softmax(const Tensor2& logits) {
    Tensor2 out(logits.rows, logits.cols);
    for (int i = 0; i < logits.rows; ++i) {
        const auto row = logits.row(i);
        const double m = *std::max_element(row.begin(), row.end());
        double sum = 0.0;
        for (int j = 0; j < logits.cols; ++j) {
            const double e = std::exp(row[static_cast<std::size_t>(j)] - m);
            out.at(i, j) = e;
            sum += e;
        }
        for (int j = 0; j < logits.cols; ++j) out.at(i, j) /= sum;
    }
    return out;
}

double cross_entropy_loss(const Tensor2& probs, std::span<const int> targets) {
    if (static_cast<std::size_t>(probs.rows) != targets.size()) {
        throw DimensionMismatchError("cross_entropy_loss: " + std::to_string(probs.rows) +
                                     " rows vs " + std::to_string(targets.size()) + " targets");
    }
    double total = 0.0;
    for (int i = 0; i < probs.rows; ++i) {
        const int t = targets[static_cast<std::size_t>(i)];
        if (t < 0 || t >= probs.cols) {
            throw OutOfRangeClassError("cross_entropy_loss: target " + std::to_string(t));
        }
        total += -std::log(std::max(probs.at(i, t), 1e-12));
    }
    return total / probs.rows;
}

DnnModel make_dnn(int input_dim, int hidden_dim, int num_classes, ActivationKind hidden_act,
                  std::uint64_t seed) {
    DnnModel model;
    model.layers.push_back(make_dense_layer(input_dim, hidden_dim, hidden_act, derive_stream(seed, 0)));
    model.layers.push_back(
        make_dense_layer(hidden_dim, num_classes, ActivationKind::Identity, derive_stream(seed, 1)));
    return model;
}

DnnForwardCache dnn_forward(const DnnModel& model, const Tensor2& x) {
    DnnForwardCache cache;
    cache.input = x;
    const Tensor2* cur = &cache.input;
    for (const DenseLayer& layer : model.layers) {
        cache.activations.push_back(dense_forward(layer, *cur));
        cur = &cache.activations.back();
    }
    cache.probs = softmax(*cur);
    return cache;
}

double dnn_backward(const DnnModel& model, const DnnForwardCache& cache,
                    std::span<const int> targets, DnnGrads& grads) {
    const std::size_t n_layers = model.layers.size();
    if (cache.activations.size() != n_layers) {
        throw DimensionMismatchError("dnn_backward: cache does not match model");
    }
    const double loss = cross_entropy_loss(cache.probs, targets);
    const int batch = cache.probs.rows;

    grads.weights.assign(n_layers, Tensor2());
    grads.biases.assign(n_layers, {});

    // Fused softmax + cross-entropy gradient at the head.
    Tensor2 delta = cache.probs;
    for (int i = 0; i < batch; ++i) {
        delta.at(i, targets[static_cast<std::size_t>(i)]) -= 1.0;
    }
    for (double& v : delta.data) v /= batch;

    for (std::size_t l = n_layers; l-- > 0;) {
        const Tensor2& input = (l == 0) ? cache.input : cache.activations[l - 1];
        grads.weights[l] = matmul_at_b(input, delta);
        grads.biases[l] = col_sums(delta);
        if (l > 0) {
            Tensor2 prev_delta = matmul_a_bt(delta, model.layers[l].weights);
            const Tensor2& prev_out = cache.activations[l - 1];
            const ActivationKind act = model.layers[l - 1].activation;
            for (std::size_t i = 0; i < prev_delta.data.size(); ++i) {
                prev_delta.data[i] *= activation_derivative_from_output(act, prev_out.data[i]);
            }
            delta = std::move(prev_delta);
        }
    }
    return loss;
}

}  // namespace nids
