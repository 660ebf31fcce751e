#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

#include "nids/dataset.hpp"
#include "nids/model.hpp"
#include "nids/optim.hpp"

namespace nids {

// Everything a training run needs. File paths live in the CLI layer; this
// struct is what gets snapshotted into model artifacts.
struct ExperimentConfig {
    SchemaName dataset = SchemaName::NslKdd;
    ModelKind model_kind = ModelKind::Dnn;
    int hidden_dim = 128;
    ActivationKind activation = ActivationKind::Relu;
    OptimizerKind optimizer = OptimizerKind::Adam;

    // Unset learning_rate resolves to the optimizer's customary default:
    // 1.0 for adadelta (the rule supplies its own scale), 0.002 otherwise.
    std::optional<double> learning_rate;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double rho = 0.95;
    double epsilon = 1e-8;

    int epochs = 20;
    int batch_size = 128;
    std::optional<std::uint64_t> seed;  // required; no silent default
    int time_steps = 1;
    std::optional<double> clip_norm;
    std::optional<double> eval_split;

    HyperParams resolved_hyper() const;
    int num_classes() const;
    void validate() const;
};

std::string config_to_json(const ExperimentConfig& config);
ExperimentConfig config_from_json(const std::string& text);
ExperimentConfig load_config(const std::filesystem::path& path);

}  // namespace nids
