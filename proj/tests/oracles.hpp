#pragma once

// Independent reference implementations the tests check the library against.
// Everything here is written as plain scalar loops, re-derived from the
// published definitions rather than shared with the library code, so a bug
// would have to be made twice (and differently) to slip through.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "nids/metrics.hpp"
#include "nids/model.hpp"
#include "nids/nn.hpp"
#include "nids/optim.hpp"
#include "nids/recurrent.hpp"
#include "nids/tensor.hpp"

namespace oracle {

inline nids::Tensor2 naive_matmul(const nids::Tensor2& a, const nids::Tensor2& b) {
    nids::Tensor2 c(a.rows, b.cols);
    for (int i = 0; i < a.rows; ++i) {
        for (int j = 0; j < b.cols; ++j) {
            double sum = 0.0;
            for (int k = 0; k < a.cols; ++k) sum += a.at(i, k) * b.at(k, j);
            c.at(i, j) = sum;
        }
    }
    return c;
}

// ---- recurrent cells, scalar form -------------------------------------

inline nids::Tensor2 scalar_rnn_step(const nids::RnnCell& cell, const nids::Tensor2& x,
                                     const nids::Tensor2& h_prev) {
    nids::Tensor2 h(x.rows, cell.hidden_dim());
    for (int r = 0; r < x.rows; ++r) {
        for (int j = 0; j < cell.hidden_dim(); ++j) {
            double z = cell.b_h[static_cast<std::size_t>(j)];
            for (int i = 0; i < cell.input_dim(); ++i) z += x.at(r, i) * cell.w_xh.at(i, j);
            for (int k = 0; k < cell.hidden_dim(); ++k) z += h_prev.at(r, k) * cell.w_hh.at(k, j);
            h.at(r, j) = std::tanh(z);
        }
    }
    return h;
}

inline std::pair<nids::Tensor2, nids::Tensor2> scalar_lstm_step(const nids::LstmCell& cell,
                                                                const nids::Tensor2& x,
                                                                const nids::Tensor2& h_prev,
                                                                const nids::Tensor2& c_prev) {
    const int hidden = cell.hidden_dim();
    nids::Tensor2 h(x.rows, hidden);
    nids::Tensor2 c(x.rows, hidden);
    auto sigmoid = [](double z) { return 1.0 / (1.0 + std::exp(-z)); };
    for (int r = 0; r < x.rows; ++r) {
        for (int j = 0; j < hidden; ++j) {
            double z[4];
            for (int gate = 0; gate < 4; ++gate) {
                const auto g = static_cast<std::size_t>(gate);
                double sum = cell.b[g][static_cast<std::size_t>(j)];
                for (int i = 0; i < cell.input_dim(); ++i) sum += x.at(r, i) * cell.w_x[g].at(i, j);
                for (int k = 0; k < hidden; ++k) sum += h_prev.at(r, k) * cell.w_h[g].at(k, j);
                z[gate] = sum;
            }
            const double i_g = sigmoid(z[nids::kInput]);
            const double f_g = sigmoid(z[nids::kForget]);
            const double o_g = sigmoid(z[nids::kOutput]);
            const double g_g = std::tanh(z[nids::kCandidate]);
            c.at(r, j) = f_g * c_prev.at(r, j) + i_g * g_g;
            h.at(r, j) = o_g * std::tanh(c.at(r, j));
        }
    }
    return {h, c};
}

// ---- central finite differences ----------------------------------------

struct FdReport {
    double max_rel_err = 0.0;
    double worst_analytic = 0.0;
    double worst_fd = 0.0;
    std::size_t checked = 0;
};

inline double loss_only(const nids::AnyModel& model, const nids::Tensor2& x,
                        std::span<const int> targets) {
    return nids::cross_entropy_loss(nids::predict_proba(model, x), targets);
}

// Central differences over every scalar parameter; relative error uses the
// larger magnitude as denominator, with near-zero pairs counted as exact.
inline FdReport check_gradients(nids::AnyModel& model, const nids::Tensor2& x,
                                std::span<const int> targets, double h) {
    nids::GradBuffers grads = nids::make_grad_buffers(model);
    nids::compute_grads(model, x, targets, grads);
    const std::vector<nids::ParamView> views = nids::param_views(model);

    FdReport report;
    for (std::size_t p = 0; p < views.size(); ++p) {
        for (std::size_t i = 0; i < views[p].size; ++i) {
            double& w = views[p].data[i];
            const double orig = w;
            w = orig + h;
            const double loss_plus = loss_only(model, x, targets);
            w = orig - h;
            const double loss_minus = loss_only(model, x, targets);
            w = orig;

            const double fd = (loss_plus - loss_minus) / (2.0 * h);
            const double an = grads.buffers[p][i];
            const double denom = std::max(std::fabs(an), std::fabs(fd));
            const double rel = denom < 1e-7 ? 0.0 : std::fabs(an - fd) / denom;
            if (rel > report.max_rel_err) {
                report.max_rel_err = rel;
                report.worst_analytic = an;
                report.worst_fd = fd;
            }
            ++report.checked;
        }
    }
    return report;
}

// ---- metrics, brute force ----------------------------------------------

struct BruteOverall {
    double accuracy = 0.0;
    std::optional<double> detection_rate;
    std::optional<double> precision;
    std::optional<double> recall;
    std::optional<double> f1;
    std::optional<double> far;
};

inline BruteOverall brute_overall(std::span<const int> y_true, std::span<const int> y_pred,
                                  int normal_class) {
    std::size_t correct = 0;
    long tp = 0, fn = 0, fp = 0, tn = 0;
    for (std::size_t i = 0; i < y_true.size(); ++i) {
        if (y_true[i] == y_pred[i]) ++correct;
        const bool true_attack = y_true[i] != normal_class;
        const bool pred_attack = y_pred[i] != normal_class;
        if (true_attack && pred_attack) ++tp;
        if (true_attack && !pred_attack) ++fn;
        if (!true_attack && pred_attack) ++fp;
        if (!true_attack && !pred_attack) ++tn;
    }

    BruteOverall m;
    m.accuracy = static_cast<double>(correct) / static_cast<double>(y_true.size());
    if (tp + fn > 0) m.recall = static_cast<double>(tp) / static_cast<double>(tp + fn);
    m.detection_rate = m.recall;
    if (tp + fp > 0) m.precision = static_cast<double>(tp) / static_cast<double>(tp + fp);
    if (m.precision && m.recall && *m.precision + *m.recall > 0.0) {
        m.f1 = 2.0 * *m.precision * *m.recall / (*m.precision + *m.recall);
    }
    if (fp + tn > 0) m.far = static_cast<double>(fp) / static_cast<double>(fp + tn);
    return m;
}

struct BrutePerClass {
    double accuracy = 0.0;
    std::optional<double> detection_rate;
};

inline BrutePerClass brute_per_class(std::span<const int> y_true, std::span<const int> y_pred,
                                     int cls) {
    std::size_t agree = 0, true_pos = 0, row = 0;
    for (std::size_t i = 0; i < y_true.size(); ++i) {
        const bool t = y_true[i] == cls;
        const bool p = y_pred[i] == cls;
        if (t == p) ++agree;
        if (t) {
            ++row;
            if (p) ++true_pos;
        }
    }
    BrutePerClass m;
    m.accuracy = static_cast<double>(agree) / static_cast<double>(y_true.size());
    if (row > 0) m.detection_rate = static_cast<double>(true_pos) / static_cast<double>(row);
    return m;
}

// All-pairs Mann-Whitney statistic: P(score_pos > score_neg) + 0.5 P(tie).
inline double mann_whitney_auc(const nids::Tensor2& scores, std::span<const int> y_true,
                               int cls) {
    double wins = 0.0;
    long pairs = 0;
    for (std::size_t i = 0; i < y_true.size(); ++i) {
        if (y_true[i] != cls) continue;
        for (std::size_t j = 0; j < y_true.size(); ++j) {
            if (y_true[j] == cls) continue;
            const double pos = scores.at(static_cast<int>(i), cls);
            const double neg = scores.at(static_cast<int>(j), cls);
            if (pos > neg) wins += 1.0;
            else if (pos == neg) wins += 0.5;
            ++pairs;
        }
    }
    return wins / static_cast<double>(pairs);
}

// ---- optimizers: literal 1-D transcriptions ------------------------------
// Each routine walks f(theta) = theta^2 (gradient 2*theta) and returns the
// parameter value after every step, written straight from the published
// update rules with scalar state.

inline std::vector<double> sgd_trajectory(double theta, int steps, const nids::HyperParams& hp) {
    std::vector<double> out;
    for (int t = 1; t <= steps; ++t) {
        const double g = 2.0 * theta;
        theta = theta - hp.learning_rate * g;
        out.push_back(theta);
    }
    return out;
}

inline std::vector<double> adagrad_trajectory(double theta, int steps,
                                              const nids::HyperParams& hp) {
    std::vector<double> out;
    double accum = 0.0;
    for (int t = 1; t <= steps; ++t) {
        const double g = 2.0 * theta;
        accum = accum + g * g;
        theta = theta - hp.learning_rate * g / (std::sqrt(accum) + hp.epsilon);
        out.push_back(theta);
    }
    return out;
}

inline std::vector<double> rmsprop_trajectory(double theta, int steps,
                                              const nids::HyperParams& hp) {
    std::vector<double> out;
    double mean_sq = 0.0;
    for (int t = 1; t <= steps; ++t) {
        const double g = 2.0 * theta;
        mean_sq = hp.rho * mean_sq + (1.0 - hp.rho) * g * g;
        theta = theta - hp.learning_rate * g / (std::sqrt(mean_sq) + hp.epsilon);
        out.push_back(theta);
    }
    return out;
}

inline std::vector<double> adadelta_trajectory(double theta, int steps,
                                               const nids::HyperParams& hp) {
    std::vector<double> out;
    double acc_grad = 0.0;
    double acc_update = 0.0;
    for (int t = 1; t <= steps; ++t) {
        const double g = 2.0 * theta;
        acc_grad = hp.rho * acc_grad + (1.0 - hp.rho) * g * g;
        const double update =
            -(std::sqrt(acc_update + hp.epsilon) / std::sqrt(acc_grad + hp.epsilon)) * g;
        acc_update = hp.rho * acc_update + (1.0 - hp.rho) * update * update;
        theta = theta + hp.learning_rate * update;
        out.push_back(theta);
    }
    return out;
}

inline std::vector<double> adam_trajectory(double theta, int steps, const nids::HyperParams& hp) {
    std::vector<double> out;
    double m = 0.0, v = 0.0;
    for (int t = 1; t <= steps; ++t) {
        const double g = 2.0 * theta;
        m = hp.beta1 * m + (1.0 - hp.beta1) * g;
        v = hp.beta2 * v + (1.0 - hp.beta2) * g * g;
        const double m_hat = m / (1.0 - std::pow(hp.beta1, t));
        const double v_hat = v / (1.0 - std::pow(hp.beta2, t));
        theta = theta - hp.learning_rate * m_hat / (std::sqrt(v_hat) + hp.epsilon);
        out.push_back(theta);
    }
    return out;
}

inline std::vector<double> adamax_trajectory(double theta, int steps,
                                             const nids::HyperParams& hp) {
    std::vector<double> out;
    double m = 0.0, u = 0.0;
    for (int t = 1; t <= steps; ++t) {
        const double g = 2.0 * theta;
        m = hp.beta1 * m + (1.0 - hp.beta1) * g;
        u = std::max(hp.beta2 * u, std::fabs(g));
        theta = theta - (hp.learning_rate / (1.0 - std::pow(hp.beta1, t))) * m /
                            (u + hp.epsilon);
        out.push_back(theta);
    }
    return out;
}

inline std::vector<double> nadam_trajectory(double theta, int steps,
                                            const nids::HyperParams& hp) {
    std::vector<double> out;
    double m = 0.0, v = 0.0;
    for (int t = 1; t <= steps; ++t) {
        const double g = 2.0 * theta;
        m = hp.beta1 * m + (1.0 - hp.beta1) * g;
        v = hp.beta2 * v + (1.0 - hp.beta2) * g * g;
        const double m_hat = m / (1.0 - std::pow(hp.beta1, t + 1.0));
        const double v_hat = v / (1.0 - std::pow(hp.beta2, t));
        const double m_bar =
            hp.beta1 * m_hat + (1.0 - hp.beta1) * g / (1.0 - std::pow(hp.beta1, t));
        theta = theta - hp.learning_rate * m_bar / (std::sqrt(v_hat) + hp.epsilon);
        out.push_back(theta);
    }
    return out;
}

inline std::vector<double> optimizer_trajectory(nids::OptimizerKind kind, double theta,
                                                int steps, const nids::HyperParams& hp) {
    switch (kind) {
        case nids::OptimizerKind::Sgd: return sgd_trajectory(theta, steps, hp);
        case nids::OptimizerKind::Adagrad: return adagrad_trajectory(theta, steps, hp);
        case nids::OptimizerKind::Adadelta: return adadelta_trajectory(theta, steps, hp);
        case nids::OptimizerKind::Rmsprop: return rmsprop_trajectory(theta, steps, hp);
        case nids::OptimizerKind::Adam: return adam_trajectory(theta, steps, hp);
        case nids::OptimizerKind::Adamax: return adamax_trajectory(theta, steps, hp);
        case nids::OptimizerKind::Nadam: return nadam_trajectory(theta, steps, hp);
    }
    return {};
}

// Drives the library optimizer over the same 1-D problem.
inline std::vector<double> library_trajectory(nids::OptimizerKind kind, double theta, int steps,
                                              const nids::HyperParams& hp) {
    const std::size_t sizes[] = {1};
    nids::OptimizerState state = nids::init_state(kind, sizes);
    std::vector<double> out;
    for (int t = 1; t <= steps; ++t) {
        const double g = 2.0 * theta;
        const nids::ParamView params[] = {{&theta, 1}};
        const nids::GradView grads[] = {{&g, 1}};
        nids::step(kind, params, grads, state, hp);
        out.push_back(theta);
    }
    return out;
}

}  // namespace oracle
