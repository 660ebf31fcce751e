#include "nids/runner.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <numeric>

#include <json.hpp>

#include "nids/errors.hpp"
#include "nids/io_util.hpp"
#include "nids/model.hpp"
#include "nids/rng.hpp"

namespace nids {

namespace {

constexpr std::uint64_t kShuffleStream = 0x9000;
constexpr int kEvalBatch = 4096;

Tensor2 batched_probs(const AnyModel& model, const Tensor2& values) {
    Tensor2 probs(values.rows, model.num_classes());
    std::vector<std::size_t> idx;
    for (int start = 0; start < values.rows; start += kEvalBatch) {
        const int end = std::min(values.rows, start + kEvalBatch);
        idx.resize(static_cast<std::size_t>(end - start));
        std::iota(idx.begin(), idx.end(), static_cast<std::size_t>(start));
        const Tensor2 batch = gather_rows(values, idx);
        const Tensor2 p = predict_proba(model, batch);
        std::copy(p.data.begin(), p.data.end(),
                  probs.data.begin() + static_cast<std::ptrdiff_t>(start) * probs.cols);
    }
    return probs;
}

double accuracy_of(const Tensor2& probs, std::span<const int> labels) {
    const std::vector<int> pred = argmax_rows(probs);
    std::size_t correct = 0;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (pred[i] == labels[i]) ++correct;
    }
    return static_cast<double>(correct) / static_cast<double>(labels.size());
}

void check_matrix_labels(const FeatureMatrix& m, int classes, const char* op) {
    if (m.rows() == 0) throw EmptyMatrixError(std::string(op) + ": matrix has no rows");
    if (m.class_indices.size() != static_cast<std::size_t>(m.rows())) {
        throw LengthMismatchError(std::string(op) + ": labels do not match matrix rows");
    }
    for (int c : m.class_indices) {
        if (c < 0 || c >= classes) {
            throw OutOfRangeClassError(std::string(op) + ": class index " + std::to_string(c));
        }
    }
}

FeatureMatrix take_matrix_rows(const FeatureMatrix& m, const std::vector<std::size_t>& indices) {
    FeatureMatrix out;
    out.values = gather_rows(m.values, indices);
    out.class_indices.reserve(indices.size());
    for (std::size_t i : indices) out.class_indices.push_back(m.class_indices[i]);
    return out;
}

std::string pct(const std::optional<double>& v) {
    if (!v) return "NA";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4f", *v * 100.0);
    return buf;
}

nlohmann::json opt_json(const std::optional<double>& v) {
    if (!v) return nullptr;
    return *v;
}

}  // namespace

TrainResult train(const ExperimentConfig& config, const FeatureMatrix& train_matrix,
                  const PipelineState& pipeline, const EpochCallback& on_epoch) {
    config.validate();
    const int classes = config.num_classes();
    check_matrix_labels(train_matrix, classes, "train");
    if (train_matrix.cols() != pipeline.encoder.total_encoded_width()) {
        throw SchemaMismatchError("train: matrix width " + std::to_string(train_matrix.cols()) +
                                  " does not match the pipeline width " +
                                  std::to_string(pipeline.encoder.total_encoded_width()));
    }

    const auto start_time = std::chrono::steady_clock::now();
    AnyModel model = make_model(config.model_kind, train_matrix.cols(), config.hidden_dim,
                                classes, config.activation, config.time_steps, *config.seed);
    const std::vector<ParamView> params = param_views(model);
    const std::vector<std::size_t> sizes = param_sizes(model);
    OptimizerState opt_state = init_state(config.optimizer, sizes);
    const HyperParams hp = config.resolved_hyper();
    GradBuffers grads = make_grad_buffers(model);

    const std::size_t n = static_cast<std::size_t>(train_matrix.rows());
    std::vector<std::size_t> order(n);
    std::vector<std::size_t> batch_idx;
    std::vector<int> batch_labels;

    TrainReport report;
    for (int epoch = 1; epoch <= config.epochs; ++epoch) {
        std::iota(order.begin(), order.end(), 0);
        Rng rng(derive_stream(*config.seed, kShuffleStream + static_cast<std::uint64_t>(epoch)));
        shuffle_indices(order, rng);

        double loss_sum = 0.0;
        for (std::size_t start = 0; start < n; start += static_cast<std::size_t>(config.batch_size)) {
            const std::size_t end = std::min(n, start + static_cast<std::size_t>(config.batch_size));
            batch_idx.assign(order.begin() + static_cast<std::ptrdiff_t>(start),
                             order.begin() + static_cast<std::ptrdiff_t>(end));
            const Tensor2 x = gather_rows(train_matrix.values, batch_idx);
            batch_labels.clear();
            for (std::size_t i : batch_idx) batch_labels.push_back(train_matrix.class_indices[i]);

            const double loss = compute_grads(model, x, batch_labels, grads);
            if (!std::isfinite(loss)) {
                throw NumericDivergenceError(
                    "training diverged: non-finite loss in epoch " + std::to_string(epoch) +
                    " (optimizer " + to_string(config.optimizer) +
                    ", learning rate " + std::to_string(hp.learning_rate) + ")");
            }
            if (config.clip_norm) clip_by_global_norm(grads, *config.clip_norm);
            step(config.optimizer, params, grads.views(), opt_state, hp);
            loss_sum += loss * static_cast<double>(end - start);
        }

        EpochStats stats;
        stats.epoch = epoch;
        stats.loss = loss_sum / static_cast<double>(n);
        stats.accuracy =
            accuracy_of(batched_probs(model, train_matrix.values), train_matrix.class_indices);
        report.epochs.push_back(stats);
        if (on_epoch) on_epoch(stats);
    }

    report.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start_time).count();
    report.param_checksum = to_hex(param_checksum(model));

    TrainResult result;
    result.artifact.version = kArtifactVersion;
    result.artifact.config = config;
    result.artifact.pipeline = pipeline;
    result.artifact.model = std::move(model);
    result.report = std::move(report);
    return result;
}

EvalOutput evaluate(const ModelArtifact& artifact, const LabeledDataset& test) {
    return evaluate_matrix(artifact, apply_pipeline(test, artifact.pipeline));
}

EvalOutput evaluate_matrix(const ModelArtifact& artifact, const FeatureMatrix& matrix) {
    const int classes = artifact.config.num_classes();
    check_matrix_labels(matrix, classes, "evaluate");
    if (matrix.cols() != artifact.model.input_dim()) {
        throw SchemaMismatchError("evaluate: matrix width " + std::to_string(matrix.cols()) +
                                  " does not match model input " +
                                  std::to_string(artifact.model.input_dim()));
    }

    const std::vector<std::string>& names = builtin_class_names(artifact.config.dataset);
    const auto normal_it = std::find(names.begin(), names.end(), "normal");
    const int normal_class = static_cast<int>(normal_it - names.begin());

    EvalOutput out;
    out.probs = batched_probs(artifact.model, matrix.values);
    out.y_true = matrix.class_indices;
    out.y_pred = argmax_rows(out.probs);
    out.report = full_report(out.probs, out.y_true, classes, normal_class);
    return out;
}

std::pair<FeatureMatrix, FeatureMatrix> split_matrix(const FeatureMatrix& m, double test_fraction,
                                                     std::uint64_t seed) {
    if (m.rows() == 0) throw EmptyMatrixError("split_matrix: matrix has no rows");
    if (!(test_fraction > 0.0 && test_fraction < 1.0)) {
        throw InvalidFractionError("split_matrix: test_fraction must lie in (0,1)");
    }
    std::vector<std::size_t> order(static_cast<std::size_t>(m.rows()));
    std::iota(order.begin(), order.end(), 0);
    Rng rng(derive_stream(seed, 0x3417));
    shuffle_indices(order, rng);

    const auto test_count =
        static_cast<std::size_t>(std::llround(test_fraction * static_cast<double>(m.rows())));
    std::vector<std::size_t> test_idx(order.begin(),
                                      order.begin() + static_cast<std::ptrdiff_t>(test_count));
    std::vector<std::size_t> train_idx(order.begin() + static_cast<std::ptrdiff_t>(test_count),
                                       order.end());
    std::sort(test_idx.begin(), test_idx.end());
    std::sort(train_idx.begin(), train_idx.end());
    return {take_matrix_rows(m, train_idx), take_matrix_rows(m, test_idx)};
}

FeatureMatrix stratified_sample_matrix(const FeatureMatrix& m, std::size_t n, std::uint64_t seed) {
    if (m.rows() == 0) throw EmptyMatrixError("stratified_sample_matrix: matrix has no rows");
    if (n > static_cast<std::size_t>(m.rows())) {
        throw InvalidFractionError("stratified_sample_matrix: n exceeds matrix rows");
    }

    std::map<int, std::vector<std::size_t>> by_class;
    for (std::size_t i = 0; i < static_cast<std::size_t>(m.rows()); ++i) {
        by_class[m.class_indices[i]].push_back(i);
    }

    struct Quota {
        int cls;
        std::size_t count;
        double remainder;
    };
    std::vector<Quota> quotas;
    std::size_t assigned = 0;
    for (const auto& [cls, rows] : by_class) {
        const double exact = static_cast<double>(n) * static_cast<double>(rows.size()) /
                             static_cast<double>(m.rows());
        const auto base = static_cast<std::size_t>(exact);
        quotas.push_back({cls, base, exact - static_cast<double>(base)});
        assigned += base;
    }
    std::stable_sort(quotas.begin(), quotas.end(),
                     [](const Quota& a, const Quota& b) { return a.remainder > b.remainder; });
    for (std::size_t i = 0; assigned < n; ++i, ++assigned) quotas[i % quotas.size()].count += 1;

    std::vector<std::size_t> chosen;
    for (const Quota& q : quotas) {
        std::vector<std::size_t>& rows = by_class[q.cls];
        Rng rng(derive_stream(seed, static_cast<std::uint64_t>(q.cls) + 0x51));
        shuffle_indices(rows, rng);
        chosen.insert(chosen.end(), rows.begin(),
                      rows.begin() + static_cast<std::ptrdiff_t>(q.count));
    }
    std::sort(chosen.begin(), chosen.end());
    return take_matrix_rows(m, chosen);
}

OptimizerComparison compare_optimizers(const ExperimentConfig& base_config,
                                       const FeatureMatrix& train_matrix,
                                       const FeatureMatrix& eval_matrix,
                                       const PipelineState& pipeline,
                                       const CompareEpochCallback& on_epoch) {
    OptimizerComparison comparison;
    for (OptimizerKind kind : kAllOptimizers) {
        ExperimentConfig config = base_config;
        config.optimizer = kind;
        EpochCallback forward;
        if (on_epoch) forward = [kind, &on_epoch](const EpochStats& s) { on_epoch(kind, s); };
        OptimizerComparisonRow row;
        row.optimizer = kind;
        try {
            const TrainResult result = train(config, train_matrix, pipeline, forward);
            row.train_seconds = result.report.wall_seconds;
            row.metrics = evaluate_matrix(result.artifact, eval_matrix).report.overall;
            row.ok = true;
        } catch (const Error& e) {
            row.ok = false;
            row.error = e.what();
        }
        comparison.rows.push_back(std::move(row));
    }

    // Rank: successes first, accuracy desc, DR desc, FAR asc; stable sort
    // keeps declaration order on exact ties.
    std::stable_sort(comparison.rows.begin(), comparison.rows.end(),
                     [](const OptimizerComparisonRow& a, const OptimizerComparisonRow& b) {
                         if (a.ok != b.ok) return a.ok;
                         if (!a.ok) return false;
                         if (a.metrics.accuracy != b.metrics.accuracy) {
                             return a.metrics.accuracy > b.metrics.accuracy;
                         }
                         const double dr_a = a.metrics.detection_rate.value_or(-1.0);
                         const double dr_b = b.metrics.detection_rate.value_or(-1.0);
                         if (dr_a != dr_b) return dr_a > dr_b;
                         const double far_a = a.metrics.far.value_or(2.0);
                         const double far_b = b.metrics.far.value_or(2.0);
                         return far_a < far_b;
                     });
    comparison.adamax_first =
        !comparison.rows.empty() && comparison.rows.front().ok &&
        comparison.rows.front().optimizer == OptimizerKind::Adamax;
    return comparison;
}

std::string comparison_to_json(const OptimizerComparison& comparison) {
    nlohmann::json doc;
    nlohmann::json rows = nlohmann::json::array();
    int rank = 1;
    for (const OptimizerComparisonRow& row : comparison.rows) {
        nlohmann::json entry;
        entry["rank"] = rank++;
        entry["optimizer"] = to_string(row.optimizer);
        entry["ok"] = row.ok;
        if (row.ok) {
            entry["accuracy"] = row.metrics.accuracy;
            entry["detection_rate"] = opt_json(row.metrics.detection_rate);
            entry["precision"] = opt_json(row.metrics.precision);
            entry["recall"] = opt_json(row.metrics.recall);
            entry["f1"] = opt_json(row.metrics.f1);
            entry["far"] = opt_json(row.metrics.far);
            entry["train_seconds"] = row.train_seconds;
        } else {
            entry["error"] = row.error;
        }
        rows.push_back(entry);
    }
    doc["rows"] = rows;
    doc["adamax_first"] = comparison.adamax_first;
    return doc.dump(2) + "\n";
}

std::string comparison_to_csv(const OptimizerComparison& comparison) {
    std::string out = "rank,optimizer,accuracy_pct,detection_rate_pct,precision_pct,f1_pct,"
                      "far_pct,train_seconds,status\n";
    int rank = 1;
    char buf[32];
    for (const OptimizerComparisonRow& row : comparison.rows) {
        out += std::to_string(rank++) + "," + to_string(row.optimizer) + ",";
        if (row.ok) {
            out += pct(row.metrics.accuracy) + "," + pct(row.metrics.detection_rate) + "," +
                   pct(row.metrics.precision) + "," + pct(row.metrics.f1) + "," +
                   pct(row.metrics.far) + ",";
            std::snprintf(buf, sizeof buf, "%.3f", row.train_seconds);
            out += buf;
            out += ",ok\n";
        } else {
            out += ",,,,,,error\n";
        }
    }
    return out;
}

void emit_report(const std::vector<NamedReport>& ours, const BaselineTable& baselines,
                 const std::filesystem::path& json_path, const std::filesystem::path& csv_path) {
    static const char* kBaselineNote =
        "published reference values from the literature, not reproduced by this run";

    nlohmann::json doc;
    doc["baseline_note"] = kBaselineNote;
    nlohmann::json runs = nlohmann::json::array();
    for (const NamedReport& r : ours) {
        runs.push_back({
            {"name", r.name},
            {"dataset", r.dataset},
            {"accuracy", r.metrics.accuracy},
            {"detection_rate", opt_json(r.metrics.detection_rate)},
            {"precision", opt_json(r.metrics.precision)},
            {"recall", opt_json(r.metrics.recall)},
            {"f1", opt_json(r.metrics.f1)},
            {"far", opt_json(r.metrics.far)},
        });
    }
    doc["runs"] = runs;
    nlohmann::json rows = nlohmann::json::array();
    for (const BaselineRecord& b : baselines.records) {
        rows.push_back({{"method", b.method},
                        {"dataset", b.dataset},
                        {"accuracy", b.accuracy},
                        {"dr", b.dr},
                        {"f1", b.f1},
                        {"fpr", b.fpr}});
    }
    doc["baselines"] = rows;
    write_text_file_atomic(json_path, doc.dump(2) + "\n");

    std::string csv = "source,method,dataset,accuracy_pct,dr_pct,f1_pct,fpr_pct\n";
    for (const NamedReport& r : ours) {
        csv += "this_run," + r.name + "," + r.dataset + "," + pct(r.metrics.accuracy) + "," +
               pct(r.metrics.detection_rate) + "," + pct(r.metrics.f1) + "," +
               pct(r.metrics.far) + "\n";
    }
    for (const BaselineRecord& b : baselines.records) {
        csv += "published," + b.method + "," + b.dataset + "," + b.accuracy + "," + b.dr + "," +
               b.f1 + "," + b.fpr + "\n";
    }
    csv += "# baseline rows: ";
    csv += kBaselineNote;
    csv += "\n";
    write_text_file_atomic(csv_path, csv);
}

}  // namespace nids
