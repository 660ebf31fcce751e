#include "nids/model.hpp"

#include <bit>
#include <cmath>

#include "nids/errors.hpp"
#include "nids/io_util.hpp"
#include "nids/rng.hpp"

namespace nids {

std::string to_string(ModelKind k) {
    switch (k) {
        case ModelKind::Dnn: return "dnn";
        case ModelKind::Rnn: return "rnn";
        case ModelKind::Lstm: return "lstm";
    }
    return "?";
}

ModelKind model_from_string(const std::string& name) {
    if (name == "dnn") return ModelKind::Dnn;
    if (name == "rnn") return ModelKind::Rnn;
    if (name == "lstm") return ModelKind::Lstm;
    throw ConfigError("unknown model kind: " + name);
}

ModelKind AnyModel::kind() const {
    return static_cast<ModelKind>(impl.index());
}

int AnyModel::input_dim() const {
    return std::visit(
        [](const auto& m) -> int {
            using M = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<M, DnnModel>) return m.input_dim();
            else return m.cell.input_dim();
        },
        impl);
}

int AnyModel::num_classes() const {
    return std::visit(
        [](const auto& m) -> int {
            if constexpr (std::is_same_v<std::decay_t<decltype(m)>, DnnModel>) {
                return m.num_classes();
            } else {
                return m.head.out_dim();
            }
        },
        impl);
}

AnyModel make_model(ModelKind kind, int input_dim, int hidden_dim, int num_classes,
                    ActivationKind hidden_activation, int time_steps, std::uint64_t seed) {
    if (input_dim < 1 || hidden_dim < 1 || num_classes < 2) {
        throw ConfigError("make_model: dimensions must satisfy input>=1, hidden>=1, classes>=2");
    }
    if (time_steps < 1) throw ConfigError("make_model: time_steps must be >= 1");

    AnyModel model;
    switch (kind) {
        case ModelKind::Dnn:
            model.impl = make_dnn(input_dim, hidden_dim, num_classes, hidden_activation, seed);
            break;
        case ModelKind::Rnn: {
            RnnClassifier rnn;
            rnn.cell = make_rnn_cell(input_dim, hidden_dim, derive_stream(seed, 10));
            rnn.head = make_dense_layer(hidden_dim, num_classes, ActivationKind::Identity,
                                        derive_stream(seed, 11));
            rnn.time_steps = time_steps;
            model.impl = std::move(rnn);
            break;
        }
        case ModelKind::Lstm: {
            LstmClassifier lstm;
            lstm.cell = make_lstm_cell(input_dim, hidden_dim, derive_stream(seed, 10));
            lstm.head = make_dense_layer(hidden_dim, num_classes, ActivationKind::Identity,
                                         derive_stream(seed, 11));
            lstm.time_steps = time_steps;
            model.impl = std::move(lstm);
            break;
        }
    }
    return model;
}

namespace {

void collect_views(DnnModel& m, std::vector<ParamView>& out) {
    for (DenseLayer& layer : m.layers) {
        out.push_back({layer.weights.data.data(), layer.weights.size()});
        out.push_back({layer.bias.data(), layer.bias.size()});
    }
}

void collect_views(RnnClassifier& m, std::vector<ParamView>& out) {
    out.push_back({m.cell.w_xh.data.data(), m.cell.w_xh.size()});
    out.push_back({m.cell.w_hh.data.data(), m.cell.w_hh.size()});
    out.push_back({m.cell.b_h.data(), m.cell.b_h.size()});
    out.push_back({m.head.weights.data.data(), m.head.weights.size()});
    out.push_back({m.head.bias.data(), m.head.bias.size()});
}

void collect_views(LstmClassifier& m, std::vector<ParamView>& out) {
    for (int g = 0; g < 4; ++g) out.push_back({m.cell.w_x[g].data.data(), m.cell.w_x[g].size()});
    for (int g = 0; g < 4; ++g) out.push_back({m.cell.w_h[g].data.data(), m.cell.w_h[g].size()});
    for (int g = 0; g < 4; ++g) out.push_back({m.cell.b[g].data(), m.cell.b[g].size()});
    out.push_back({m.head.weights.data.data(), m.head.weights.size()});
    out.push_back({m.head.bias.data(), m.head.bias.size()});
}

}  // namespace

std::vector<ParamView> param_views(AnyModel& model) {
    std::vector<ParamView> out;
    std::visit([&](auto& m) { collect_views(m, out); }, model.impl);
    return out;
}

std::vector<std::size_t> param_sizes(const AnyModel& model) {
    // Safe: views are only read for their sizes.
    auto& mutable_model = const_cast<AnyModel&>(model);
    std::vector<std::size_t> sizes;
    for (const ParamView& v : param_views(mutable_model)) sizes.push_back(v.size);
    return sizes;
}

std::vector<GradView> GradBuffers::views() const {
    std::vector<GradView> out;
    out.reserve(buffers.size());
    for (const std::vector<double>& b : buffers) out.push_back({b.data(), b.size()});
    return out;
}

GradBuffers make_grad_buffers(const AnyModel& model) {
    GradBuffers grads;
    for (std::size_t n : param_sizes(model)) grads.buffers.emplace_back(n, 0.0);
    return grads;
}

namespace {

Tensor2 zeros(int rows, int cols) { return Tensor2(rows, cols); }

Tensor2 head_probs(const DenseLayer& head, const Tensor2& h) {
    return softmax(dense_forward(head, h));
}

// dL/dlogits for mean softmax cross-entropy: (probs - onehot) / batch.
Tensor2 logit_delta(const Tensor2& probs, std::span<const int> targets) {
    Tensor2 delta = probs;
    for (int i = 0; i < delta.rows; ++i) {
        const int t = targets[static_cast<std::size_t>(i)];
        if (t < 0 || t >= delta.cols) {
            throw OutOfRangeClassError("compute_grads: target " + std::to_string(t));
        }
        delta.at(i, t) -= 1.0;
    }
    for (double& v : delta.data) v /= delta.rows;
    return delta;
}

}  // namespace

Tensor2 predict_proba(const AnyModel& model, const Tensor2& x) {
    if (x.cols != model.input_dim()) {
        throw DimensionMismatchError("predict_proba: input width " + std::to_string(x.cols) +
                                     " vs model input_dim " + std::to_string(model.input_dim()));
    }
    return std::visit(
        [&](const auto& m) -> Tensor2 {
            using M = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<M, DnnModel>) {
                return dnn_forward(m, x).probs;
            } else if constexpr (std::is_same_v<M, RnnClassifier>) {
                const SequenceBatch seq = repeat_record(x, m.time_steps);
                const RnnCache cache =
                    unroll_forward(m.cell, seq, zeros(x.rows, m.cell.hidden_dim()));
                return head_probs(m.head, cache.final_hidden());
            } else {
                const SequenceBatch seq = repeat_record(x, m.time_steps);
                const LstmCache cache =
                    unroll_forward(m.cell, seq, zeros(x.rows, m.cell.hidden_dim()),
                                   zeros(x.rows, m.cell.hidden_dim()));
                return head_probs(m.head, cache.final_hidden());
            }
        },
        model.impl);
}

double compute_grads(const AnyModel& model, const Tensor2& x, std::span<const int> targets,
                     GradBuffers& grads) {
    if (x.cols != model.input_dim()) {
        throw DimensionMismatchError("compute_grads: input width " + std::to_string(x.cols) +
                                     " vs model input_dim " + std::to_string(model.input_dim()));
    }
    if (static_cast<std::size_t>(x.rows) != targets.size()) {
        throw LengthMismatchError("compute_grads: batch of " + std::to_string(x.rows) +
                                  " rows vs " + std::to_string(targets.size()) + " targets");
    }
    if (grads.buffers.size() != param_sizes(model).size()) grads = make_grad_buffers(model);

    return std::visit(
        [&](const auto& m) -> double {
            using M = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<M, DnnModel>) {
                const DnnForwardCache cache = dnn_forward(m, x);
                DnnGrads dg;
                const double loss = dnn_backward(m, cache, targets, dg);
                for (std::size_t l = 0; l < m.layers.size(); ++l) {
                    grads.buffers[2 * l] = std::move(dg.weights[l].data);
                    grads.buffers[2 * l + 1] = std::move(dg.biases[l]);
                }
                return loss;
            } else if constexpr (std::is_same_v<M, RnnClassifier>) {
                const SequenceBatch seq = repeat_record(x, m.time_steps);
                const RnnCache cache =
                    unroll_forward(m.cell, seq, zeros(x.rows, m.cell.hidden_dim()));
                const Tensor2& h_last = cache.final_hidden();
                const Tensor2 probs = head_probs(m.head, h_last);
                const double loss = cross_entropy_loss(probs, targets);

                const Tensor2 delta = logit_delta(probs, targets);
                Tensor2 head_w = matmul_at_b(h_last, delta);
                std::vector<double> head_b = col_sums(delta);
                const Tensor2 dh = matmul_a_bt(delta, m.head.weights);

                RnnGrads rg = bptt_backward(m.cell, cache, dh);
                grads.buffers[0] = std::move(rg.w_xh.data);
                grads.buffers[1] = std::move(rg.w_hh.data);
                grads.buffers[2] = std::move(rg.b_h);
                grads.buffers[3] = std::move(head_w.data);
                grads.buffers[4] = std::move(head_b);
                return loss;
            } else {
                const SequenceBatch seq = repeat_record(x, m.time_steps);
                const LstmCache cache =
                    unroll_forward(m.cell, seq, zeros(x.rows, m.cell.hidden_dim()),
                                   zeros(x.rows, m.cell.hidden_dim()));
                const Tensor2& h_last = cache.final_hidden();
                const Tensor2 probs = head_probs(m.head, h_last);
                const double loss = cross_entropy_loss(probs, targets);

                const Tensor2 delta = logit_delta(probs, targets);
                Tensor2 head_w = matmul_at_b(h_last, delta);
                std::vector<double> head_b = col_sums(delta);
                const Tensor2 dh = matmul_a_bt(delta, m.head.weights);

                LstmGrads lg = bptt_backward(m.cell, cache, dh);
                for (int g = 0; g < 4; ++g) {
                    grads.buffers[static_cast<std::size_t>(g)] = std::move(lg.w_x[g].data);
                    grads.buffers[static_cast<std::size_t>(4 + g)] = std::move(lg.w_h[g].data);
                    grads.buffers[static_cast<std::size_t>(8 + g)] = std::move(lg.b[g]);
                }
                grads.buffers[12] = std::move(head_w.data);
                grads.buffers[13] = std::move(head_b);
                return loss;
            }
        },
        model.impl);
}

void clip_by_global_norm(GradBuffers& grads, double clip) {
    if (!(clip > 0.0)) throw ConfigError("clip_by_global_norm: clip must be > 0");
    double sq = 0.0;
    for (const std::vector<double>& b : grads.buffers) {
        for (double v : b) sq += v * v;
    }
    const double norm = std::sqrt(sq);
    if (norm <= clip) return;
    const double scale = clip / norm;
    for (std::vector<double>& b : grads.buffers) {
        for (double& v : b) v *= scale;
    }
}

std::uint64_t param_checksum(const AnyModel& model) {
    std::string bytes;
    auto& mutable_model = const_cast<AnyModel&>(model);
    for (const ParamView& view : param_views(mutable_model)) {
        for (std::size_t i = 0; i < view.size; ++i) {
            auto u = std::bit_cast<std::uint64_t>(view.data[i]);
            for (int byte = 0; byte < 8; ++byte) {
                bytes.push_back(static_cast<char>((u >> (8 * byte)) & 0xff));
            }
        }
    }
    return fnv1a64(bytes);
}

}  // namespace nids
