#include "nids/optim.hpp"

#include <algorithm>
#include <cmath>

#include "nids/errors.hpp"

namespace nids {

std::string to_string(OptimizerKind k) {
    switch (k) {
        case OptimizerKind::Sgd: return "sgd";
        case OptimizerKind::Adagrad: return "adagrad";
        case OptimizerKind::Adadelta: return "adadelta";
        case OptimizerKind::Rmsprop: return "rmsprop";
        case OptimizerKind::Adam: return "adam";
        case OptimizerKind::Adamax: return "adamax";
        case OptimizerKind::Nadam: return "nadam";
    }
    return "?";
}

OptimizerKind optimizer_from_string(const std::string& name) {
    for (OptimizerKind k : kAllOptimizers) {
        if (to_string(k) == name) return k;
    }
    throw ConfigError("unknown optimizer: " + name);
}

void HyperParams::validate() const {
    if (!(learning_rate > 0.0)) throw ConfigError("learning_rate must be > 0");
    if (beta1 < 0.0 || beta1 >= 1.0) throw ConfigError("beta1 must be in [0,1)");
    if (beta2 < 0.0 || beta2 >= 1.0) throw ConfigError("beta2 must be in [0,1)");
    if (rho < 0.0 || rho >= 1.0) throw ConfigError("rho must be in [0,1)");
    if (!(epsilon > 0.0)) throw ConfigError("epsilon must be > 0");
}

OptimizerState init_state(OptimizerKind kind, std::span<const std::size_t> param_sizes) {
    OptimizerState state;
    state.kind = kind;
    state.t = 0;
    state.initialized = true;
    const bool needs_a = kind != OptimizerKind::Sgd;
    const bool needs_b = kind == OptimizerKind::Adadelta || kind == OptimizerKind::Adam ||
                         kind == OptimizerKind::Adamax || kind == OptimizerKind::Nadam;
    for (std::size_t n : param_sizes) {
        state.slot_a.push_back(needs_a ? std::vector<double>(n, 0.0) : std::vector<double>());
        state.slot_b.push_back(needs_b ? std::vector<double>(n, 0.0) : std::vector<double>());
    }
    return state;
}

void step(OptimizerKind kind, std::span<const ParamView> params, std::span<const GradView> grads,
          OptimizerState& state, const HyperParams& hp) {
    if (!state.initialized) throw UninitializedStateError("optimizer state not initialized");
    if (state.kind != kind) {
        throw UninitializedStateError("optimizer state was initialized for " +
                                      to_string(state.kind) + ", stepped as " + to_string(kind));
    }
    if (params.size() != grads.size() || params.size() != state.slot_a.size()) {
        throw ShapeMismatchError("optimizer step: tensor count mismatch");
    }
    hp.validate();

    const double eta = hp.learning_rate;
    const double b1 = hp.beta1;
    const double b2 = hp.beta2;
    const double rho = hp.rho;
    const double eps = hp.epsilon;

    state.t += 1;
    const double t = static_cast<double>(state.t);
    // Bias corrections shared by the adam family.
    const double bc1 = 1.0 - std::pow(b1, t);
    const double bc2 = 1.0 - std::pow(b2, t);

    for (std::size_t p = 0; p < params.size(); ++p) {
        double* w = params[p].data;
        const double* g = grads[p].data;
        const std::size_t n = params[p].size;
        if (grads[p].size != n) throw ShapeMismatchError("optimizer step: gradient size mismatch");
        if (kind != OptimizerKind::Sgd && state.slot_a[p].size() != n) {
            throw ShapeMismatchError("optimizer step: state slot size mismatch");
        }
        std::vector<double>& a = state.slot_a[p];
        std::vector<double>& b = state.slot_b[p];

        switch (kind) {
            case OptimizerKind::Sgd:
                for (std::size_t i = 0; i < n; ++i) w[i] -= eta * g[i];
                break;

            case OptimizerKind::Adagrad:
                // Duchi et al. (2011).
                for (std::size_t i = 0; i < n; ++i) {
                    a[i] += g[i] * g[i];
                    w[i] -= eta * g[i] / (std::sqrt(a[i]) + eps);
                }
                break;

            case OptimizerKind::Rmsprop:
                // Hinton's lecture-note rule with a decayed squared-gradient average.
                for (std::size_t i = 0; i < n; ++i) {
                    a[i] = rho * a[i] + (1.0 - rho) * g[i] * g[i];
                    w[i] -= eta * g[i] / (std::sqrt(a[i]) + eps);
                }
                break;

            case OptimizerKind::Adadelta:
                // Zeiler (2012); learning_rate acts as a final scale (1.0 classic).
                for (std::size_t i = 0; i < n; ++i) {
                    a[i] = rho * a[i] + (1.0 - rho) * g[i] * g[i];
                    const double update =
                        -std::sqrt(b[i] + eps) / std::sqrt(a[i] + eps) * g[i];
                    b[i] = rho * b[i] + (1.0 - rho) * update * update;
                    w[i] += eta * update;
                }
                break;

            case OptimizerKind::Adam:
                // Kingma & Ba (2015), algorithm 1.
                for (std::size_t i = 0; i < n; ++i) {
                    a[i] = b1 * a[i] + (1.0 - b1) * g[i];
                    b[i] = b2 * b[i] + (1.0 - b2) * g[i] * g[i];
                    const double m_hat = a[i] / bc1;
                    const double v_hat = b[i] / bc2;
                    w[i] -= eta * m_hat / (std::sqrt(v_hat) + eps);
                }
                break;

            case OptimizerKind::Adamax:
                // Kingma & Ba (2015), algorithm 2: infinity-norm second moment.
                for (std::size_t i = 0; i < n; ++i) {
                    a[i] = b1 * a[i] + (1.0 - b1) * g[i];
                    b[i] = std::max(b2 * b[i], std::fabs(g[i]));
                    w[i] -= (eta / bc1) * a[i] / (b[i] + eps);
                }
                break;

            case OptimizerKind::Nadam:
                // Dozat (2016) with a constant momentum schedule: the update mixes
                // the bias-corrected momentum with the current gradient.
                for (std::size_t i = 0; i < n; ++i) {
                    a[i] = b1 * a[i] + (1.0 - b1) * g[i];
                    b[i] = b2 * b[i] + (1.0 - b2) * g[i] * g[i];
                    const double m_hat = a[i] / (1.0 - std::pow(b1, t + 1.0));
                    const double v_hat = b[i] / bc2;
                    const double m_bar = b1 * m_hat + (1.0 - b1) * g[i] / bc1;
                    w[i] -= eta * m_bar / (std::sqrt(v_hat) + eps);
                }
                break;
        }
    }
}

}  // namespace nids
