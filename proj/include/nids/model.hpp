#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "nids/nn.hpp"
#include "nids/optim.hpp"
#include "nids/recurrent.hpp"

namespace nids {

enum class ModelKind { Dnn, Rnn, Lstm };

std::string to_string(ModelKind k);
ModelKind model_from_string(const std::string& name);

// Recurrent classifiers feed the final hidden state through a dense head
// (Identity activation; softmax is applied by the loss/predict path).
struct RnnClassifier {
    RnnCell cell;
    DenseLayer head;
    int time_steps = 1;
};

struct LstmClassifier {
    LstmCell cell;
    DenseLayer head;
    int time_steps = 1;
};

struct AnyModel {
    std::variant<DnnModel, RnnClassifier, LstmClassifier> impl;

    ModelKind kind() const;
    int input_dim() const;
    int num_classes() const;
};

AnyModel make_model(ModelKind kind, int input_dim, int hidden_dim, int num_classes,
                    ActivationKind hidden_activation, int time_steps, std::uint64_t seed);

// Flat mutable views over every parameter tensor, in a stable order:
//   DNN:  per layer, weights then bias
//   RNN:  w_xh, w_hh, b_h, head weights, head bias
//   LSTM: w_x[i,f,o,g], w_h[i,f,o,g], b[i,f,o,g], head weights, head bias
std::vector<ParamView> param_views(AnyModel& model);
std::vector<std::size_t> param_sizes(const AnyModel& model);

// Gradient storage parallel to the param_views order.
struct GradBuffers {
    std::vector<std::vector<double>> buffers;

    std::vector<GradView> views() const;
};

GradBuffers make_grad_buffers(const AnyModel& model);

// Class probabilities for a batch (one row per record).
Tensor2 predict_proba(const AnyModel& model, const Tensor2& x);

// Mean softmax cross-entropy over the batch; fills `grads` with the analytic
// parameter gradients and returns the loss.
double compute_grads(const AnyModel& model, const Tensor2& x, std::span<const int> targets,
                     GradBuffers& grads);

// Rescales all gradients by clip/norm when the global L2 norm exceeds clip.
void clip_by_global_norm(GradBuffers& grads, double clip);

// FNV-1a over the little-endian float64 bytes of all parameters in view order.
std::uint64_t param_checksum(const AnyModel& model);

}  // namespace nids
