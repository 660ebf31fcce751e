#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include "nids/artifact.hpp"
#include "nids/baselines.hpp"
#include "nids/config.hpp"
#include "nids/dataset.hpp"
#include "nids/metrics.hpp"
#include "nids/preprocess.hpp"

namespace nids {

struct EpochStats {
    int epoch = 0;       // 1-based
    double loss = 0.0;   // mean cross-entropy over the epoch's batches
    double accuracy = 0.0;
};

struct TrainReport {
    std::vector<EpochStats> epochs;
    double wall_seconds = 0.0;
    std::string param_checksum;  // hex
};

struct TrainResult {
    ModelArtifact artifact;
    TrainReport report;
};

using EpochCallback = std::function<void(const EpochStats&)>;

// Seeded mini-batch training. Shuffles every epoch with a counter-derived
// stream of config.seed, so results do not depend on thread count or on any
// other consumer of randomness. Throws NumericDivergenceError when the loss
// stops being finite.
TrainResult train(const ExperimentConfig& config, const FeatureMatrix& train_matrix,
                  const PipelineState& pipeline, const EpochCallback& on_epoch = {});

struct EvalOutput {
    MetricsReport report;
    Tensor2 probs;
    std::vector<int> y_true;
    std::vector<int> y_pred;
};

// Applies the artifact's stored pipeline (never refits) and scores the data.
EvalOutput evaluate(const ModelArtifact& artifact, const LabeledDataset& test);
// Same, for data that is already encoded + normalized.
EvalOutput evaluate_matrix(const ModelArtifact& artifact, const FeatureMatrix& matrix);

// Deterministic row split of an encoded matrix (held-out evaluation).
std::pair<FeatureMatrix, FeatureMatrix> split_matrix(const FeatureMatrix& m, double test_fraction,
                                                     std::uint64_t seed);

// Proportional per-class subsample of an encoded matrix.
FeatureMatrix stratified_sample_matrix(const FeatureMatrix& m, std::size_t n, std::uint64_t seed);

struct OptimizerComparisonRow {
    OptimizerKind optimizer = OptimizerKind::Sgd;
    bool ok = false;
    std::string error;        // set when !ok
    OverallMetrics metrics;   // valid when ok
    double train_seconds = 0.0;
};

struct OptimizerComparison {
    std::vector<OptimizerComparisonRow> rows;  // ranked; failed rows sink last
    bool adamax_first = false;                 // recorded observation, nothing asserted
};

using CompareEpochCallback = std::function<void(OptimizerKind, const EpochStats&)>;

// Trains the identical model/seed/data under all seven optimizers and ranks
// the rows by accuracy, then detection rate, then FAR ascending (ties resolve
// in declaration order). A failing optimizer contributes an error row instead
// of aborting the rest.
OptimizerComparison compare_optimizers(const ExperimentConfig& base_config,
                                       const FeatureMatrix& train_matrix,
                                       const FeatureMatrix& eval_matrix,
                                       const PipelineState& pipeline,
                                       const CompareEpochCallback& on_epoch = {});

std::string comparison_to_json(const OptimizerComparison& comparison);
std::string comparison_to_csv(const OptimizerComparison& comparison);

struct NamedReport {
    std::string name;  // e.g. "dnn/nslkdd (this run)"
    std::string dataset;
    OverallMetrics metrics;
};

// Writes JSON + CSV tables holding our runs next to the shipped published
// baselines (which are labeled as reference values, not reproduced results).
void emit_report(const std::vector<NamedReport>& ours, const BaselineTable& baselines,
                 const std::filesystem::path& json_path, const std::filesystem::path& csv_path);

}  // namespace nids
