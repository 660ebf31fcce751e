#include <cmath>
#include <vector>

#include <doctest.h>

#include "nids/errors.hpp"
#include "nids/model.hpp"
#include "nids/nn.hpp"
#include "nids/rng.hpp"
#include "oracles.hpp"

using namespace nids;

TEST_SUITE("nn") {

TEST_CASE("activations and output-form derivatives") {
    CHECK(apply_activation(ActivationKind::Relu, -2.0) == 0.0);
    CHECK(apply_activation(ActivationKind::Relu, 3.0) == 3.0);
    CHECK(apply_activation(ActivationKind::Identity, -7.5) == -7.5);
    CHECK(apply_activation(ActivationKind::Sigmoid, 0.0) == doctest::Approx(0.5));
    CHECK(apply_activation(ActivationKind::Tanh, 0.0) == 0.0);

    // f'(z) expressed through a = f(z), checked against direct derivatives.
    for (double z : {-1.5, -0.2, 0.3, 2.0}) {
        const double sig = apply_activation(ActivationKind::Sigmoid, z);
        CHECK(activation_derivative_from_output(ActivationKind::Sigmoid, sig) ==
              doctest::Approx(sig * (1.0 - sig)).epsilon(1e-12));
        const double th = apply_activation(ActivationKind::Tanh, z);
        CHECK(activation_derivative_from_output(ActivationKind::Tanh, th) ==
              doctest::Approx(1.0 - th * th).epsilon(1e-12));
        CHECK(activation_derivative_from_output(ActivationKind::Relu,
                                                apply_activation(ActivationKind::Relu, z)) ==
              (z > 0.0 ? 1.0 : 0.0));
        CHECK(activation_derivative_from_output(ActivationKind::Identity, z) == 1.0);
    }
}

TEST_CASE("glorot_init: deterministic and inside the fan bound") {
    const Tensor2 w1 = glorot_init(8, 4, 99);
    const Tensor2 w2 = glorot_init(8, 4, 99);
    CHECK(w1 == w2);
    const Tensor2 w3 = glorot_init(8, 4, 100);
    CHECK(w1 != w3);

    const double bound = std::sqrt(6.0 / (8 + 4));
    for (double v : w1.data) {
        CHECK(std::fabs(v) <= bound);
    }
}

TEST_CASE("dense_forward computes f(xW + b)") {
    DenseLayer layer;
    layer.weights = Tensor2(2, 2, {1.0, 2.0, 3.0, 4.0});
    layer.bias = {0.5, -0.5};
    layer.activation = ActivationKind::Identity;
    const Tensor2 x(1, 2, {1.0, 1.0});
    const Tensor2 out = dense_forward(layer, x);
    CHECK(out.at(0, 0) == doctest::Approx(4.5));
    CHECK(out.at(0, 1) == doctest::Approx(5.5));

    layer.activation = ActivationKind::Relu;
    layer.bias = {-10.0, -0.5};
    const Tensor2 relu_out = dense_forward(layer, x);
    CHECK(relu_out.at(0, 0) == 0.0);
    CHECK(relu_out.at(0, 1) == doctest::Approx(5.5));
}

TEST_CASE("softmax: rows sum to one, stable under large logits") {
    const Tensor2 logits(2, 3, {1000.0, 1001.0, 999.0,
                                -1000.0, -1000.0, -1000.0});
    const Tensor2 p = softmax(logits);
    for (int r = 0; r < 2; ++r) {
        double sum = 0.0;
        for (int c = 0; c < 3; ++c) {
            CHECK(std::isfinite(p.at(r, c)));
            sum += p.at(r, c);
        }
        CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
    }
    CHECK(p.at(0, 1) > p.at(0, 0));
    CHECK(p.at(1, 0) == doctest::Approx(1.0 / 3.0));
}

TEST_CASE("cross_entropy_loss: mean of -ln p_target, floored") {
    const Tensor2 probs(2, 2, {0.8, 0.2, 0.4, 0.6});
    const std::vector<int> targets = {0, 1};
    const double want = -(std::log(0.8) + std::log(0.6)) / 2.0;
    CHECK(cross_entropy_loss(probs, targets) == doctest::Approx(want).epsilon(1e-12));

    // An exact zero probability must not produce infinity.
    const Tensor2 zero(1, 2, {0.0, 1.0});
    const std::vector<int> t0 = {0};
    const double floored = cross_entropy_loss(zero, t0);
    CHECK(std::isfinite(floored));
    CHECK(floored == doctest::Approx(-std::log(1e-12)));
}

TEST_CASE("make_dnn wires input -> hidden -> classes") {
    const DnnModel model = make_dnn(10, 7, 4, ActivationKind::Relu, 3);
    REQUIRE(model.layers.size() == 2);
    CHECK(model.layers[0].in_dim() == 10);
    CHECK(model.layers[0].out_dim() == 7);
    CHECK(model.layers[0].activation == ActivationKind::Relu);
    CHECK(model.layers[1].out_dim() == 4);
    CHECK(model.layers[1].activation == ActivationKind::Identity);
    CHECK(model.input_dim() == 10);
    CHECK(model.num_classes() == 4);
}

TEST_CASE("dnn gradients agree with finite differences") {
    Rng rng(2024);
    for (int trial = 0; trial < 3; ++trial) {
        const int in = 3 + static_cast<int>(rng.next_below(5));
        const int hidden = 2 + static_cast<int>(rng.next_below(5));
        const int classes = 2 + static_cast<int>(rng.next_below(3));
        const int batch = 1 + static_cast<int>(rng.next_below(6));
        AnyModel model = make_model(ModelKind::Dnn, in, hidden, classes, ActivationKind::Tanh,
                                    1, rng.next_u64());
        Tensor2 x(batch, in);
        for (double& v : x.data) v = rng.next_uniform(0.0, 1.0);
        std::vector<int> targets;
        for (int r = 0; r < batch; ++r) {
            targets.push_back(static_cast<int>(rng.next_below(static_cast<std::uint64_t>(classes))));
        }
        const oracle::FdReport report = oracle::check_gradients(model, x, targets, 1e-5);
        CHECK(report.max_rel_err < 1e-4);
    }
}

TEST_CASE("dnn gradients: relu model also matches finite differences") {
    Rng rng(77);
    AnyModel model = make_model(ModelKind::Dnn, 6, 5, 3, ActivationKind::Relu, 1, 41);
    Tensor2 x(4, 6);
    for (double& v : x.data) v = rng.next_uniform(0.1, 1.0);
    const std::vector<int> targets = {0, 1, 2, 1};
    const oracle::FdReport report = oracle::check_gradients(model, x, targets, 1e-5);
    CHECK(report.max_rel_err < 1e-4);
}

}  // TEST_SUITE
