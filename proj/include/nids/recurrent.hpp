#pragma once

#include <array>
#include <cstdint>
#include <utility>
#include <vector>

#include "nids/tensor.hpp"

namespace nids {

// h_t = tanh(x_t * W_xh + h_{t-1} * W_hh + b_h)
struct RnnCell {
    Tensor2 w_xh;               // input_dim x hidden_dim
    Tensor2 w_hh;               // hidden_dim x hidden_dim
    std::vector<double> b_h;    // hidden_dim

    int input_dim() const { return w_xh.rows; }
    int hidden_dim() const { return w_xh.cols; }
};

RnnCell make_rnn_cell(int input_dim, int hidden_dim, std::uint64_t seed);

// Gate order for LstmCell parameter arrays.
enum LstmGate { kInput = 0, kForget = 1, kOutput = 2, kCandidate = 3 };

// i,f,o = sigmoid(...), g = tanh(...)
// c_t = f . c_{t-1} + i . g ; h_t = o . tanh(c_t)
struct LstmCell {
    std::array<Tensor2, 4> w_x;              // input_dim x hidden_dim each
    std::array<Tensor2, 4> w_h;              // hidden_dim x hidden_dim each
    std::array<std::vector<double>, 4> b;    // hidden_dim each

    int input_dim() const { return w_x[0].rows; }
    int hidden_dim() const { return w_x[0].cols; }
};

LstmCell make_lstm_cell(int input_dim, int hidden_dim, std::uint64_t seed);

// Per-step inputs; every step is a (batch x input_dim) tensor.
struct SequenceBatch {
    std::vector<Tensor2> steps;

    int time_steps() const { return static_cast<int>(steps.size()); }
    int batch() const { return steps.empty() ? 0 : steps.front().rows; }
    int width() const { return steps.empty() ? 0 : steps.front().cols; }
};

// Tabular records enter the recurrent models as length-T sequences that
// repeat the encoded record at every step (T defaults to 1).
SequenceBatch repeat_record(const Tensor2& x, int time_steps);

Tensor2 rnn_step(const RnnCell& cell, const Tensor2& x_t, const Tensor2& h_prev);

std::pair<Tensor2, Tensor2> lstm_step(const LstmCell& cell, const Tensor2& x_t,
                                      const Tensor2& h_prev, const Tensor2& c_prev);

struct RnnCache {
    SequenceBatch inputs;
    Tensor2 h0;
    std::vector<Tensor2> h;    // hidden state after each step

    const Tensor2& final_hidden() const { return h.back(); }
};

struct LstmCache {
    SequenceBatch inputs;
    Tensor2 h0;
    Tensor2 c0;
    std::vector<std::array<Tensor2, 4>> gates;  // i, f, o, g per step
    std::vector<Tensor2> c;
    std::vector<Tensor2> h;

    const Tensor2& final_hidden() const { return h.back(); }
};

RnnCache unroll_forward(const RnnCell& cell, const SequenceBatch& seq, const Tensor2& h0);
LstmCache unroll_forward(const LstmCell& cell, const SequenceBatch& seq, const Tensor2& h0,
                         const Tensor2& c0);

struct RnnGrads {
    Tensor2 w_xh;
    Tensor2 w_hh;
    std::vector<double> b_h;
    std::vector<Tensor2> inputs;   // dL/dx_t per step
    Tensor2 h0;                    // dL/dh0
};

struct LstmGrads {
    std::array<Tensor2, 4> w_x;
    std::array<Tensor2, 4> w_h;
    std::array<std::vector<double>, 4> b;
    std::vector<Tensor2> inputs;
    Tensor2 h0;
    Tensor2 c0;
};

// Exact backpropagation through time. `upstream` is dL/dh_T (the gradient
// flowing into the final hidden state; intermediate hidden states receive
// gradient only through the recurrence).
RnnGrads bptt_backward(const RnnCell& cell, const RnnCache& cache, const Tensor2& upstream);
LstmGrads bptt_backward(const LstmCell& cell, const LstmCache& cache, const Tensor2& upstream);

}  // namespace nids
