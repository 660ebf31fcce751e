#include "nids/recurrent.hpp"

#include <cmath>
#include <string>

#include "nids/errors.hpp"
#include "nids/nn.hpp"
#include "nids/rng.hpp"

namespace nids {

namespace {

double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

void check_step_shapes(const char* op, int x_cols, int h_cols, int in_dim, int hidden) {
    if (x_cols != in_dim || h_cols != hidden) {
        throw DimensionMismatchError(std::string(op) + ": input " + std::to_string(x_cols) +
                                     "/hidden " + std::to_string(h_cols) + " vs cell " +
                                     std::to_string(in_dim) + "/" + std::to_string(hidden));
    }
}

// Pre-activations of one gate: x*W_x + h_prev*W_h + b.
Tensor2 gate_preact(const Tensor2& x, const Tensor2& h_prev, const Tensor2& wx, const Tensor2& wh,
                    const std::vector<double>& b) {
    Tensor2 z = matmul(x, wx);
    const Tensor2 rec = matmul(h_prev, wh);
    for (std::size_t i = 0; i < z.data.size(); ++i) z.data[i] += rec.data[i];
    add_row_vector(z, b);
    return z;
}

}  // namespace

RnnCell make_rnn_cell(int input_dim, int hidden_dim, std::uint64_t seed) {
    RnnCell cell;
    cell.w_xh = glorot_init(input_dim, hidden_dim, derive_stream(seed, 0));
    cell.w_hh = glorot_init(hidden_dim, hidden_dim, derive_stream(seed, 1));
    cell.b_h.assign(static_cast<std::size_t>(hidden_dim), 0.0);
    return cell;
}

LstmCell make_lstm_cell(int input_dim, int hidden_dim, std::uint64_t seed) {
    LstmCell cell;
    for (int g = 0; g < 4; ++g) {
        cell.w_x[g] = glorot_init(input_dim, hidden_dim, derive_stream(seed, 2 * g));
        cell.w_h[g] = glorot_init(hidden_dim, hidden_dim, derive_stream(seed, 2 * g + 1));
        cell.b[g].assign(static_cast<std::size_t>(hidden_dim), 0.0);
    }
    return cell;
}

SequenceBatch repeat_record(const Tensor2& x, int time_steps) {
    SequenceBatch seq;
    seq.steps.assign(static_cast<std::size_t>(time_steps), x);
    return seq;
}

Tensor2 rnn_step(const RnnCell& cell, const Tensor2& x_t, const Tensor2& h_prev) {
    check_step_shapes("rnn_step", x_t.cols, h_prev.cols, cell.input_dim(), cell.hidden_dim());
    Tensor2 h = gate_preact(x_t, h_prev, cell.w_xh, cell.w_hh, cell.b_h);
    for (double& v : h.data) v = std::tanh(v);
    return h;
}

std::pair<Tensor2, Tensor2> lstm_step(const LstmCell& cell, const Tensor2& x_t,
                                      const Tensor2& h_prev, const Tensor2& c_prev) {
    check_step_shapes("lstm_step", x_t.cols, h_prev.cols, cell.input_dim(), cell.hidden_dim());
    if (!c_prev.same_shape(h_prev)) {
        throw DimensionMismatchError("lstm_step: c_prev shape differs from h_prev");
    }
    std::array<Tensor2, 4> gates;
    for (int g = 0; g < 4; ++g) {
        gates[g] = gate_preact(x_t, h_prev, cell.w_x[g], cell.w_h[g], cell.b[g]);
        for (double& v : gates[g].data) v = (g == kCandidate) ? std::tanh(v) : sigmoid(v);
    }
    Tensor2 c(c_prev.rows, c_prev.cols);
    Tensor2 h(c_prev.rows, c_prev.cols);
    for (std::size_t i = 0; i < c.data.size(); ++i) {
        c.data[i] = gates[kForget].data[i] * c_prev.data[i] +
                    gates[kInput].data[i] * gates[kCandidate].data[i];
        h.data[i] = gates[kOutput].data[i] * std::tanh(c.data[i]);
    }
    return {std::move(h), std::move(c)};
}

RnnCache unroll_forward(const RnnCell& cell, const SequenceBatch& seq, const Tensor2& h0) {
    RnnCache cache;
    cache.inputs = seq;
    cache.h0 = h0;
    const Tensor2* h_prev = &cache.h0;
    for (const Tensor2& x_t : seq.steps) {
        cache.h.push_back(rnn_step(cell, x_t, *h_prev));
        h_prev = &cache.h.back();
    }
    return cache;
}

LstmCache unroll_forward(const LstmCell& cell, const SequenceBatch& seq, const Tensor2& h0,
                         const Tensor2& c0) {
    LstmCache cache;
    cache.inputs = seq;
    cache.h0 = h0;
    cache.c0 = c0;
    const Tensor2* h_prev = &cache.h0;
    const Tensor2* c_prev = &cache.c0;
    for (const Tensor2& x_t : seq.steps) {
        check_step_shapes("unroll_forward", x_t.cols, h_prev->cols, cell.input_dim(),
                          cell.hidden_dim());
        std::array<Tensor2, 4> gates;
        for (int g = 0; g < 4; ++g) {
            gates[g] = gate_preact(x_t, *h_prev, cell.w_x[g], cell.w_h[g], cell.b[g]);
            for (double& v : gates[g].data) v = (g == kCandidate) ? std::tanh(v) : sigmoid(v);
        }
        Tensor2 c(x_t.rows, cell.hidden_dim());
        Tensor2 h(x_t.rows, cell.hidden_dim());
        for (std::size_t i = 0; i < c.data.size(); ++i) {
            c.data[i] = gates[kForget].data[i] * c_prev->data[i] +
                        gates[kInput].data[i] * gates[kCandidate].data[i];
            h.data[i] = gates[kOutput].data[i] * std::tanh(c.data[i]);
        }
        cache.gates.push_back(std::move(gates));
        cache.c.push_back(std::move(c));
        cache.h.push_back(std::move(h));
        h_prev = &cache.h.back();
        c_prev = &cache.c.back();
    }
    return cache;
}

RnnGrads bptt_backward(const RnnCell& cell, const RnnCache& cache, const Tensor2& upstream) {
    if (cache.h.empty() || cache.inputs.width() != cell.input_dim() ||
        cache.h0.cols != cell.hidden_dim()) {
        throw StaleCacheError("bptt_backward: cache does not match RNN cell");
    }
    if (!upstream.same_shape(cache.h.back())) {
        throw StaleCacheError("bptt_backward: upstream gradient shape mismatch");
    }
    const int T = cache.inputs.time_steps();

    RnnGrads grads;
    grads.w_xh = Tensor2(cell.w_xh.rows, cell.w_xh.cols);
    grads.w_hh = Tensor2(cell.w_hh.rows, cell.w_hh.cols);
    grads.b_h.assign(cell.b_h.size(), 0.0);
    grads.inputs.assign(static_cast<std::size_t>(T), Tensor2());

    Tensor2 dh = upstream;
    for (int t = T - 1; t >= 0; --t) {
        // dz = dh . tanh'(z) with tanh' recovered from the stored output.
        Tensor2 dz = dh;
        const Tensor2& h_t = cache.h[static_cast<std::size_t>(t)];
        for (std::size_t i = 0; i < dz.data.size(); ++i) {
            dz.data[i] *= 1.0 - h_t.data[i] * h_t.data[i];
        }
        const Tensor2& x_t = cache.inputs.steps[static_cast<std::size_t>(t)];
        const Tensor2& h_prev = (t == 0) ? cache.h0 : cache.h[static_cast<std::size_t>(t - 1)];

        const Tensor2 gwx = matmul_at_b(x_t, dz);
        const Tensor2 gwh = matmul_at_b(h_prev, dz);
        for (std::size_t i = 0; i < gwx.data.size(); ++i) grads.w_xh.data[i] += gwx.data[i];
        for (std::size_t i = 0; i < gwh.data.size(); ++i) grads.w_hh.data[i] += gwh.data[i];
        const std::vector<double> gb = col_sums(dz);
        for (std::size_t i = 0; i < gb.size(); ++i) grads.b_h[i] += gb[i];

        grads.inputs[static_cast<std::size_t>(t)] = matmul_a_bt(dz, cell.w_xh);
        dh = matmul_a_bt(dz, cell.w_hh);
    }
    grads.h0 = std::move(dh);
    return grads;
}

LstmGrads bptt_backward(const LstmCell& cell, const LstmCache& cache, const Tensor2& upstream) {
    if (cache.h.empty() || cache.inputs.width() != cell.input_dim() ||
        cache.h0.cols != cell.hidden_dim()) {
        throw StaleCacheError("bptt_backward: cache does not match LSTM cell");
    }
    if (!upstream.same_shape(cache.h.back())) {
        throw StaleCacheError("bptt_backward: upstream gradient shape mismatch");
    }
    const int T = cache.inputs.time_steps();
    const int batch = cache.inputs.batch();
    const int hidden = cell.hidden_dim();

    LstmGrads grads;
    for (int g = 0; g < 4; ++g) {
        grads.w_x[g] = Tensor2(cell.w_x[g].rows, cell.w_x[g].cols);
        grads.w_h[g] = Tensor2(cell.w_h[g].rows, cell.w_h[g].cols);
        grads.b[g].assign(cell.b[g].size(), 0.0);
    }
    grads.inputs.assign(static_cast<std::size_t>(T), Tensor2());

    Tensor2 dh = upstream;
    Tensor2 dc(batch, hidden);
    for (int t = T - 1; t >= 0; --t) {
        const auto& gates = cache.gates[static_cast<std::size_t>(t)];
        const Tensor2& c_t = cache.c[static_cast<std::size_t>(t)];
        const Tensor2& c_prev = (t == 0) ? cache.c0 : cache.c[static_cast<std::size_t>(t - 1)];
        const Tensor2& h_prev = (t == 0) ? cache.h0 : cache.h[static_cast<std::size_t>(t - 1)];
        const Tensor2& x_t = cache.inputs.steps[static_cast<std::size_t>(t)];

        // Gate pre-activation gradients, elementwise.
        std::array<Tensor2, 4> dz;
        for (int g = 0; g < 4; ++g) dz[g] = Tensor2(batch, hidden);
        for (std::size_t i = 0; i < dh.data.size(); ++i) {
            const double tc = std::tanh(c_t.data[i]);
            const double i_g = gates[kInput].data[i];
            const double f_g = gates[kForget].data[i];
            const double o_g = gates[kOutput].data[i];
            const double g_g = gates[kCandidate].data[i];

            const double dcv = dc.data[i] + dh.data[i] * o_g * (1.0 - tc * tc);
            const double dov = dh.data[i] * tc;
            const double div = dcv * g_g;
            const double dfv = dcv * c_prev.data[i];
            const double dgv = dcv * i_g;

            dz[kInput].data[i] = div * i_g * (1.0 - i_g);
            dz[kForget].data[i] = dfv * f_g * (1.0 - f_g);
            dz[kOutput].data[i] = dov * o_g * (1.0 - o_g);
            dz[kCandidate].data[i] = dgv * (1.0 - g_g * g_g);
            dc.data[i] = dcv * f_g;
        }

        Tensor2 dx(batch, cell.input_dim());
        Tensor2 dh_prev(batch, hidden);
        for (int g = 0; g < 4; ++g) {
            const Tensor2 gwx = matmul_at_b(x_t, dz[g]);
            const Tensor2 gwh = matmul_at_b(h_prev, dz[g]);
            for (std::size_t i = 0; i < gwx.data.size(); ++i) grads.w_x[g].data[i] += gwx.data[i];
            for (std::size_t i = 0; i < gwh.data.size(); ++i) grads.w_h[g].data[i] += gwh.data[i];
            const std::vector<double> gb = col_sums(dz[g]);
            for (std::size_t i = 0; i < gb.size(); ++i) grads.b[g][i] += gb[i];

            const Tensor2 dxg = matmul_a_bt(dz[g], cell.w_x[g]);
            const Tensor2 dhg = matmul_a_bt(dz[g], cell.w_h[g]);
            for (std::size_t i = 0; i < dx.data.size(); ++i) dx.data[i] += dxg.data[i];
            for (std::size_t i = 0; i < dh_prev.data.size(); ++i) dh_prev.data[i] += dhg.data[i];
        }
        grads.inputs[static_cast<std::size_t>(t)] = std::move(dx);
        dh = std::move(dh_prev);
    }
    grads.h0 = std::move(dh);
    grads.c0 = std::move(dc);
    return grads;
}

}  // namespace nids
