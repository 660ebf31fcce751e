#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "nids/tensor.hpp"

namespace nids {

enum class ActivationKind { Sigmoid, Tanh, Relu, Identity };

std::string to_string(ActivationKind k);
ActivationKind activation_from_string(const std::string& name);

double apply_activation(ActivationKind k, double z);
// Derivative expressed in terms of the activation *output* a = f(z).
// Works for all four kinds (ReLU uses a > 0, which matches f'(z) for z != 0).
double activation_derivative_from_output(ActivationKind k, double a);

struct DenseLayer {
    Tensor2 weights;            // in_dim x out_dim
    std::vector<double> bias;   // out_dim
    ActivationKind activation = ActivationKind::Identity;

    int in_dim() const { return weights.rows; }
    int out_dim() const { return weights.cols; }
};

DenseLayer make_dense_layer(int in_dim, int out_dim, ActivationKind act, std::uint64_t seed);

// out = f(x * W + b), rows of x are independent samples.
Tensor2 dense_forward(const DenseLayer& layer, const Tensor2& x);

// Row-wise softmax, computed max-subtracted.
Tensor2 softmax(const Tensor2& logits);

// Mean over rows of -ln probs[row][target]; probabilities floored at 1e-12.
double cross_entropy_loss(const Tensor2& probs, std::span<const int> targets);

// Feed-forward classifier: a stack of dense layers whose last layer emits
// class logits (its activation should be Identity) feeding a softmax head.
struct DnnModel {
    std::vector<DenseLayer> layers;

    int input_dim() const { return layers.front().in_dim(); }
    int num_classes() const { return layers.back().out_dim(); }
};

// input -> hidden_dim (hidden_act) -> num_classes, seeded per layer.
DnnModel make_dnn(int input_dim, int hidden_dim, int num_classes, ActivationKind hidden_act,
                  std::uint64_t seed);

struct DnnForwardCache {
    Tensor2 input;
    std::vector<Tensor2> activations;  // one per layer; last holds the logits
    Tensor2 probs;
};

DnnForwardCache dnn_forward(const DnnModel& model, const Tensor2& x);

struct DnnGrads {
    std::vector<Tensor2> weights;            // parallel to model.layers
    std::vector<std::vector<double>> biases;
};

// Analytic gradients of the mean softmax cross-entropy over the batch.
// Returns the loss; `grads` is resized to match the model.
double dnn_backward(const DnnModel& model, const DnnForwardCache& cache,
                    std::span<const int> targets, DnnGrads& grads);

// Uniform in +/- sqrt(6 / (in_dim + out_dim)), deterministic per seed.
Tensor2 glorot_init(int in_dim, int out_dim, std::uint64_t seed);

}  // namespace nids
