#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace nids {

enum class OptimizerKind { Sgd, Adagrad, Adadelta, Rmsprop, Adam, Adamax, Nadam };

inline constexpr OptimizerKind kAllOptimizers[] = {
    OptimizerKind::Sgd,     OptimizerKind::Adagrad, OptimizerKind::Adadelta,
    OptimizerKind::Rmsprop, OptimizerKind::Adam,    OptimizerKind::Adamax,
    OptimizerKind::Nadam};

std::string to_string(OptimizerKind k);
OptimizerKind optimizer_from_string(const std::string& name);

struct HyperParams {
    double learning_rate = 0.002;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double rho = 0.95;     // decay for adadelta / rmsprop accumulators
    double epsilon = 1e-8;

    void validate() const;
};

// Mutable flat view over one parameter tensor.
struct ParamView {
    double* data = nullptr;
    std::size_t size = 0;
};

struct GradView {
    const double* data = nullptr;
    std::size_t size = 0;
};

// Per-parameter accumulator slots. Which of slot_a / slot_b are used depends
// on the rule:
//   sgd       -
//   adagrad   a = sum of squared gradients
//   adadelta  a = decayed squared gradients, b = decayed squared updates
//   rmsprop   a = decayed squared gradients
//   adam      a = first moment m, b = second moment v
//   adamax    a = first moment m, b = infinity norm u
//   nadam     a = first moment m, b = second moment v
struct OptimizerState {
    OptimizerKind kind = OptimizerKind::Sgd;
    long t = 0;
    std::vector<std::vector<double>> slot_a;
    std::vector<std::vector<double>> slot_b;
    bool initialized = false;
};

OptimizerState init_state(OptimizerKind kind, std::span<const std::size_t> param_sizes);

// One update over all parameter tensors; increments state.t exactly once.
// Gradients are never modified.
void step(OptimizerKind kind, std::span<const ParamView> params, std::span<const GradView> grads,
          OptimizerState& state, const HyperParams& hp);

}  // namespace nids
