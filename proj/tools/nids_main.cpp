// nids: command-line surface for the intrusion-detection pipeline.
// Data flows between subcommands through files:
//   preprocess -> pipeline.json + matrix.json
//   train      -> model.json
//   evaluate / roc / compare-optimizers / report -> metrics tables
// Logs go to stderr, machine-readable results to stdout/files.

#include <cstdio>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "nids/artifact.hpp"
#include "nids/baselines.hpp"
#include "nids/config.hpp"
#include "nids/dataset.hpp"
#include "nids/errors.hpp"
#include "nids/io_util.hpp"
#include "nids/metrics.hpp"
#include "nids/preprocess.hpp"
#include "nids/runner.hpp"

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitInternal = 1;
constexpr int kExitInput = 2;
constexpr int kExitDiverged = 3;

fs::path default_data_dir() {
    if (const char* env = std::getenv("NIDS_DATA_DIR")) return env;
    return "data";
}

fs::path default_taxonomy(const fs::path& data_dir, nids::SchemaName schema) {
    return data_dir / "taxonomy" /
           (schema == nids::SchemaName::UnswNb15 ? "unsw.tsv" : "kdd.tsv");
}

void log_line(const std::string& msg) { std::cerr << msg << "\n"; }

void print_epoch(const nids::EpochStats& s) {
    std::fprintf(stderr, "epoch,%d,loss,%.6f,acc,%.6f\n", s.epoch, s.loss, s.accuracy);
}

json overall_to_json(const nids::OverallMetrics& m) {
    auto opt = [](const std::optional<double>& v) { return v ? json(*v) : json(nullptr); };
    return {{"accuracy", m.accuracy},  {"detection_rate", opt(m.detection_rate)},
            {"precision", opt(m.precision)}, {"recall", opt(m.recall)},
            {"f1", opt(m.f1)},         {"far", opt(m.far)}};
}

// All experiment fields, so a config file is optional and any field of one is
// overridable. Strings stay unparsed until build_config, which also knows
// which flags were actually passed.
struct ConfigFlags {
    std::string config_path;
    std::string dataset;
    std::string model;
    std::string activation;
    std::string optimizer;
    int hidden_dim = 0;
    int epochs = 0;
    int batch_size = 0;
    int time_steps = 0;
    double learning_rate = 0.0;
    double beta1 = 0.0;
    double beta2 = 0.0;
    double rho = 0.0;
    double epsilon = 0.0;
    double clip_norm = 0.0;
    double eval_split = 0.0;
    std::uint64_t seed = 0;
};

void add_config_flags(CLI::App* cmd, ConfigFlags& f, bool with_optimizer) {
    cmd->add_option("--config", f.config_path, "experiment config JSON; flags override its fields")
        ->check(CLI::ExistingFile);
    cmd->add_option("--dataset", f.dataset, "kdd99|nslkdd|unswnb15");
    cmd->add_option("--model", f.model, "dnn|rnn|lstm");
    cmd->add_option("--activation", f.activation, "hidden activation: sigmoid|tanh|relu|identity");
    if (with_optimizer) {
        cmd->add_option("--optimizer", f.optimizer,
                        "sgd|adagrad|adadelta|rmsprop|adam|adamax|nadam");
    }
    cmd->add_option("--hidden-dim", f.hidden_dim, "hidden layer width");
    cmd->add_option("--epochs", f.epochs, "training epochs");
    cmd->add_option("--batch-size", f.batch_size, "mini-batch size");
    cmd->add_option("--time-steps", f.time_steps, "sequence length for rnn/lstm");
    cmd->add_option("--lr", f.learning_rate, "learning rate (default 0.002; adadelta 1.0)");
    cmd->add_option("--beta1", f.beta1, "first-moment decay (adam family)");
    cmd->add_option("--beta2", f.beta2, "second-moment decay (adam family)");
    cmd->add_option("--rho", f.rho, "accumulator decay (adadelta/rmsprop)");
    cmd->add_option("--epsilon", f.epsilon, "numerical stabilizer");
    cmd->add_option("--clip-norm", f.clip_norm, "global gradient-norm clip");
    cmd->add_option("--eval-split", f.eval_split,
                    "hold out this fraction of the matrix for post-training evaluation");
    cmd->add_option("--seed", f.seed, "experiment seed (required; no silent default)");
}

nids::ExperimentConfig build_config(const CLI::App* cmd, const ConfigFlags& f) {
    nids::ExperimentConfig cfg;
    if (cmd->count("--config")) cfg = nids::load_config(f.config_path);
    if (cmd->count("--dataset")) cfg.dataset = nids::schema_from_string(f.dataset);
    if (cmd->count("--model")) cfg.model_kind = nids::model_from_string(f.model);
    if (cmd->count("--activation")) cfg.activation = nids::activation_from_string(f.activation);
    if (cmd->get_option_no_throw("--optimizer") != nullptr && cmd->count("--optimizer")) {
        cfg.optimizer = nids::optimizer_from_string(f.optimizer);
    }
    if (cmd->count("--hidden-dim")) cfg.hidden_dim = f.hidden_dim;
    if (cmd->count("--epochs")) cfg.epochs = f.epochs;
    if (cmd->count("--batch-size")) cfg.batch_size = f.batch_size;
    if (cmd->count("--time-steps")) cfg.time_steps = f.time_steps;
    if (cmd->count("--lr")) cfg.learning_rate = f.learning_rate;
    if (cmd->count("--beta1")) cfg.beta1 = f.beta1;
    if (cmd->count("--beta2")) cfg.beta2 = f.beta2;
    if (cmd->count("--rho")) cfg.rho = f.rho;
    if (cmd->count("--epsilon")) cfg.epsilon = f.epsilon;
    if (cmd->count("--clip-norm")) cfg.clip_norm = f.clip_norm;
    if (cmd->count("--eval-split")) cfg.eval_split = f.eval_split;
    if (cmd->count("--seed")) cfg.seed = f.seed;
    return cfg;
}

std::string predictions_csv(const nids::EvalOutput& out,
                            const std::vector<std::string>& class_names) {
    std::string csv = "row,true_class,pred_class";
    for (const std::string& name : class_names) csv += ",p_" + name;
    csv += "\n";
    char buf[32];
    for (int r = 0; r < out.probs.rows; ++r) {
        csv += std::to_string(r) + "," +
               class_names[static_cast<std::size_t>(out.y_true[static_cast<std::size_t>(r)])] +
               "," +
               class_names[static_cast<std::size_t>(out.y_pred[static_cast<std::size_t>(r)])];
        for (int c = 0; c < out.probs.cols; ++c) {
            std::snprintf(buf, sizeof buf, ",%.6f", out.probs.at(r, c));
            csv += buf;
        }
        csv += "\n";
    }
    return csv;
}

struct PreprocessArgs {
    std::string dataset = "nslkdd";
    fs::path csv;
    fs::path taxonomy;
    fs::path out_pipeline;
    fs::path out_matrix;
    bool has_header = false;
};

int run_preprocess(const PreprocessArgs& a, const fs::path& data_dir) {
    const nids::SchemaName schema = nids::schema_from_string(a.dataset);
    const fs::path tax_path = a.taxonomy.empty() ? default_taxonomy(data_dir, schema) : a.taxonomy;
    const nids::AttackTaxonomy taxonomy =
        nids::load_taxonomy(tax_path, nids::builtin_class_names(schema));

    log_line("loading " + a.csv.string());
    const nids::LabeledDataset ds =
        nids::load_csv(a.csv, nids::builtin_schema(schema), taxonomy, a.has_header);
    log_line("fitting pipeline on " + std::to_string(ds.size()) + " records");
    const nids::PipelineState pipeline = nids::fit_pipeline(ds);
    const nids::FeatureMatrix matrix = nids::apply_pipeline(ds, pipeline);

    nids::save_pipeline(a.out_pipeline, pipeline);
    nids::save_matrix(a.out_matrix, matrix);

    json dist;
    for (const auto& [cls, count] : nids::class_distribution(ds)) {
        dist[taxonomy.class_names[static_cast<std::size_t>(cls)]] = count;
    }
    const json summary = {{"schema", nids::to_string(schema)},
                          {"rows", ds.size()},
                          {"encoded_width", pipeline.encoder.total_encoded_width()},
                          {"class_distribution", dist},
                          {"pipeline_path", a.out_pipeline.string()},
                          {"matrix_path", a.out_matrix.string()}};
    std::cout << summary.dump(2) << "\n";
    return kExitOk;
}

struct TrainArgs {
    ConfigFlags flags;
    fs::path pipeline;
    fs::path matrix;
    fs::path out_model;
};

int run_train(const CLI::App* cmd, const TrainArgs& a) {
    const nids::ExperimentConfig cfg = build_config(cmd, a.flags);
    const nids::PipelineState pipeline = nids::load_pipeline(a.pipeline);
    nids::FeatureMatrix matrix = nids::load_matrix(a.matrix);

    std::optional<nids::FeatureMatrix> holdout;
    if (cfg.eval_split) {
        cfg.validate();  // seed must exist before we consume it for the split
        auto [train_part, eval_part] = nids::split_matrix(matrix, *cfg.eval_split, *cfg.seed);
        matrix = std::move(train_part);
        holdout = std::move(eval_part);
        log_line("holding out " + std::to_string(holdout->rows()) + " of " +
                 std::to_string(matrix.rows() + holdout->rows()) + " rows for evaluation");
    }

    const nids::TrainResult result = nids::train(cfg, matrix, pipeline, print_epoch);
    nids::save_model(result.artifact, a.out_model);

    json summary = {{"model_path", a.out_model.string()},
                    {"epochs", result.report.epochs.size()},
                    {"wall_seconds", result.report.wall_seconds},
                    {"param_checksum", result.report.param_checksum},
                    {"final_loss", result.report.epochs.back().loss},
                    {"final_accuracy", result.report.epochs.back().accuracy},
                    {"eval_protocol", holdout ? "holdout_split" : "none"}};
    if (holdout) {
        summary["holdout"] = overall_to_json(
            nids::evaluate_matrix(result.artifact, *holdout).report.overall);
    }
    std::cout << summary.dump(2) << "\n";
    return kExitOk;
}

struct EvalArgs {
    fs::path model;
    fs::path matrix;
    fs::path test_csv;
    fs::path taxonomy;
    bool has_header = false;
    fs::path out_metrics;
    fs::path out_metrics_csv;
    fs::path out_predictions;
};

nids::EvalOutput eval_from_args(const nids::ModelArtifact& artifact, const EvalArgs& a,
                                const fs::path& data_dir) {
    if (!a.matrix.empty() && !a.test_csv.empty()) {
        throw nids::ConfigError("pass either --matrix or --test-csv, not both");
    }
    if (!a.matrix.empty()) return nids::evaluate_matrix(artifact, nids::load_matrix(a.matrix));
    if (a.test_csv.empty()) throw nids::ConfigError("one of --matrix or --test-csv is required");

    const nids::SchemaName schema = artifact.config.dataset;
    const fs::path tax_path = a.taxonomy.empty() ? default_taxonomy(data_dir, schema) : a.taxonomy;
    const nids::AttackTaxonomy taxonomy =
        nids::load_taxonomy(tax_path, nids::builtin_class_names(schema));
    const nids::LabeledDataset ds =
        nids::load_csv(a.test_csv, nids::builtin_schema(schema), taxonomy, a.has_header);
    return nids::evaluate(artifact, ds);
}

int run_evaluate(const EvalArgs& a, const fs::path& data_dir) {
    const nids::ModelArtifact artifact = nids::load_model(a.model);
    const nids::EvalOutput out = eval_from_args(artifact, a, data_dir);
    const std::vector<std::string>& names = nids::builtin_class_names(artifact.config.dataset);

    const std::string metrics_json = nids::metrics_to_json(out.report, names);
    if (!a.out_metrics.empty()) nids::write_text_file_atomic(a.out_metrics, metrics_json);
    if (!a.out_metrics_csv.empty()) {
        nids::write_text_file_atomic(a.out_metrics_csv, nids::metrics_to_csv(out.report, names));
    }
    if (!a.out_predictions.empty()) {
        nids::write_text_file_atomic(a.out_predictions, predictions_csv(out, names));
    }
    std::cout << metrics_json;
    return kExitOk;
}

struct RocArgs {
    EvalArgs eval;
    fs::path out_dir;
};

int run_roc(const RocArgs& a, const fs::path& data_dir) {
    const nids::ModelArtifact artifact = nids::load_model(a.eval.model);
    const nids::EvalOutput out = eval_from_args(artifact, a.eval, data_dir);
    const std::vector<std::string>& names = nids::builtin_class_names(artifact.config.dataset);

    fs::create_directories(a.out_dir);
    json files = json::object();
    for (const nids::RocCurve& curve : out.report.roc) {
        const fs::path path =
            a.out_dir / ("roc_" + names[static_cast<std::size_t>(curve.cls)] + ".csv");
        nids::write_text_file_atomic(path, nids::roc_to_csv(curve));
        files[names[static_cast<std::size_t>(curve.cls)]] = {{"path", path.string()},
                                                             {"auc", curve.auc}};
    }
    json degenerate = json::array();
    for (int cls : out.report.degenerate_classes) {
        degenerate.push_back(names[static_cast<std::size_t>(cls)]);
    }
    const json summary = {{"curves", files}, {"degenerate_classes", degenerate}};
    std::cout << summary.dump(2) << "\n";
    return kExitOk;
}

struct CompareArgs {
    ConfigFlags flags;
    fs::path pipeline;
    fs::path train_matrix;
    fs::path eval_matrix;
    fs::path matrix;  // alternative: one matrix split by --eval-split
    fs::path out_json;
    fs::path out_csv;
};

int run_compare(const CLI::App* cmd, const CompareArgs& a) {
    const nids::ExperimentConfig cfg = build_config(cmd, a.flags);
    const nids::PipelineState pipeline = nids::load_pipeline(a.pipeline);

    nids::FeatureMatrix train_m;
    nids::FeatureMatrix eval_m;
    if (!a.matrix.empty()) {
        if (!a.train_matrix.empty() || !a.eval_matrix.empty()) {
            throw nids::ConfigError("--matrix excludes --train-matrix/--eval-matrix");
        }
        cfg.validate();
        const double fraction = cfg.eval_split.value_or(0.2);
        std::tie(train_m, eval_m) = nids::split_matrix(nids::load_matrix(a.matrix), fraction,
                                                       *cfg.seed);
    } else {
        if (a.train_matrix.empty() || a.eval_matrix.empty()) {
            throw nids::ConfigError("pass --matrix, or both --train-matrix and --eval-matrix");
        }
        train_m = nids::load_matrix(a.train_matrix);
        eval_m = nids::load_matrix(a.eval_matrix);
    }

    const nids::OptimizerComparison comparison = nids::compare_optimizers(
        cfg, train_m, eval_m, pipeline,
        [](nids::OptimizerKind kind, const nids::EpochStats& s) {
            if (s.epoch == 1) log_line("# optimizer " + nids::to_string(kind));
            print_epoch(s);
        });

    const std::string doc = nids::comparison_to_json(comparison);
    if (!a.out_json.empty()) nids::write_text_file_atomic(a.out_json, doc);
    if (!a.out_csv.empty()) {
        nids::write_text_file_atomic(a.out_csv, nids::comparison_to_csv(comparison));
    }
    std::cout << doc;
    return kExitOk;
}

struct ReportArgs {
    std::vector<std::string> runs;  // "name,dataset,metrics.json"
    fs::path out_json;
    fs::path out_csv;
};

nids::OverallMetrics overall_from_metrics_file(const fs::path& path) {
    json doc;
    try {
        doc = json::parse(nids::read_text_file(path));
    } catch (const json::exception& e) {
        throw nids::ConfigError("malformed metrics JSON " + path.string() + ": " + e.what());
    }
    try {
        const json& overall = doc.at("overall");
        nids::OverallMetrics m;
        m.accuracy = overall.at("accuracy").get<double>();
        auto opt = [&overall](const char* key) -> std::optional<double> {
            if (!overall.contains(key) || overall.at(key).is_null()) return std::nullopt;
            return overall.at(key).get<double>();
        };
        m.detection_rate = opt("detection_rate");
        m.precision = opt("precision");
        m.recall = opt("recall");
        m.f1 = opt("f1");
        m.far = opt("far");
        return m;
    } catch (const json::exception& e) {
        throw nids::ConfigError("metrics JSON " + path.string() +
                                " lacks the overall block: " + e.what());
    }
}

int run_report(const ReportArgs& a) {
    std::vector<nids::NamedReport> ours;
    for (const std::string& spec : a.runs) {
        const auto first = spec.find(',');
        const auto second = spec.find(',', first == std::string::npos ? first : first + 1);
        if (first == std::string::npos || second == std::string::npos) {
            throw nids::ConfigError("--run expects name,dataset,metrics.json (got '" + spec +
                                    "')");
        }
        nids::NamedReport run;
        run.name = spec.substr(0, first);
        run.dataset = spec.substr(first + 1, second - first - 1);
        run.metrics = overall_from_metrics_file(spec.substr(second + 1));
        ours.push_back(std::move(run));
    }
    nids::emit_report(ours, nids::published_baselines(), a.out_json, a.out_csv);
    std::cout << nids::read_text_file(a.out_json);
    return kExitOk;
}

int dispatch(int argc, char** argv) {
    CLI::App app{"multi-attack network intrusion detection: preprocess, train, evaluate"};
    app.require_subcommand(1);
    int threads = 1;
    fs::path data_dir = default_data_dir();
    app.add_option("--threads", threads,
                   "worker-thread cap (compute is single-threaded; results never depend on it)")
        ->check(CLI::PositiveNumber);
    app.add_option("--data-dir", data_dir,
                   "base directory for taxonomies and caches (env NIDS_DATA_DIR)");

    PreprocessArgs pre_args;
    CLI::App* pre = app.add_subcommand("preprocess", "fit encoder+normalizer, emit matrix");
    pre->add_option("--dataset", pre_args.dataset, "kdd99|nslkdd|unswnb15");
    pre->add_option("--train-csv", pre_args.csv, "raw CSV to fit on")
        ->required()
        ->check(CLI::ExistingFile);
    pre->add_option("--taxonomy", pre_args.taxonomy, "label taxonomy TSV (default per dataset)");
    pre->add_flag("--has-header", pre_args.has_header, "skip the first CSV line");
    pre->add_option("--out-pipeline", pre_args.out_pipeline, "pipeline state output")->required();
    pre->add_option("--out-matrix", pre_args.out_matrix, "encoded matrix output")->required();

    TrainArgs train_args;
    CLI::App* train_cmd = app.add_subcommand("train", "train a model on an encoded matrix");
    add_config_flags(train_cmd, train_args.flags, /*with_optimizer=*/true);
    train_cmd->add_option("--pipeline", train_args.pipeline, "pipeline state from preprocess")
        ->required()
        ->check(CLI::ExistingFile);
    train_cmd->add_option("--matrix", train_args.matrix, "encoded matrix from preprocess")
        ->required()
        ->check(CLI::ExistingFile);
    train_cmd->add_option("--out-model", train_args.out_model, "model artifact output")
        ->required();

    EvalArgs eval_args;
    CLI::App* eval_cmd = app.add_subcommand("evaluate", "score a dataset with a trained model");
    eval_cmd->add_option("--model", eval_args.model, "model artifact")
        ->required()
        ->check(CLI::ExistingFile);
    eval_cmd->add_option("--matrix", eval_args.matrix, "encoded matrix to score");
    eval_cmd->add_option("--test-csv", eval_args.test_csv, "raw CSV to score");
    eval_cmd->add_option("--taxonomy", eval_args.taxonomy, "taxonomy for --test-csv");
    eval_cmd->add_flag("--has-header", eval_args.has_header, "skip the first CSV line");
    eval_cmd->add_option("--out-metrics", eval_args.out_metrics, "metrics JSON output");
    eval_cmd->add_option("--out-metrics-csv", eval_args.out_metrics_csv, "metrics CSV output");
    eval_cmd->add_option("--out-predictions", eval_args.out_predictions,
                         "per-row predictions CSV output");

    RocArgs roc_args;
    CLI::App* roc_cmd = app.add_subcommand("roc", "per-class ROC curves as fpr/tpr CSVs");
    roc_cmd->add_option("--model", roc_args.eval.model, "model artifact")
        ->required()
        ->check(CLI::ExistingFile);
    roc_cmd->add_option("--matrix", roc_args.eval.matrix, "encoded matrix to score");
    roc_cmd->add_option("--test-csv", roc_args.eval.test_csv, "raw CSV to score");
    roc_cmd->add_option("--taxonomy", roc_args.eval.taxonomy, "taxonomy for --test-csv");
    roc_cmd->add_flag("--has-header", roc_args.eval.has_header, "skip the first CSV line");
    roc_cmd->add_option("--out-dir", roc_args.out_dir, "directory for roc_<class>.csv files")
        ->required();

    CompareArgs cmp_args;
    CLI::App* cmp_cmd =
        app.add_subcommand("compare-optimizers", "train under all 7 optimizers, rank results");
    add_config_flags(cmp_cmd, cmp_args.flags, /*with_optimizer=*/false);
    cmp_cmd->add_option("--pipeline", cmp_args.pipeline, "pipeline state")
        ->required()
        ->check(CLI::ExistingFile);
    cmp_cmd->add_option("--train-matrix", cmp_args.train_matrix, "encoded training matrix");
    cmp_cmd->add_option("--eval-matrix", cmp_args.eval_matrix, "encoded evaluation matrix");
    cmp_cmd->add_option("--matrix", cmp_args.matrix,
                        "single matrix, split by --eval-split (default 0.2)");
    cmp_cmd->add_option("--out-json", cmp_args.out_json, "ranked table JSON output");
    cmp_cmd->add_option("--out-csv", cmp_args.out_csv, "ranked table CSV output");

    ReportArgs report_args;
    CLI::App* report_cmd =
        app.add_subcommand("report", "merge run metrics with the published-baselines table");
    report_cmd
        ->add_option("--run", report_args.runs,
                     "name,dataset,metrics.json (repeatable; may be omitted)")
        ->take_all();
    report_cmd->add_option("--out-json", report_args.out_json, "report JSON output")->required();
    report_cmd->add_option("--out-csv", report_args.out_csv, "report CSV output")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitInput;
    }

    if (threads != 1) {
        log_line("note: --threads " + std::to_string(threads) +
                 " accepted; compute runs single-threaded and results do not depend on it");
    }

    if (pre->parsed()) return run_preprocess(pre_args, data_dir);
    if (train_cmd->parsed()) return run_train(train_cmd, train_args);
    if (eval_cmd->parsed()) return run_evaluate(eval_args, data_dir);
    if (roc_cmd->parsed()) return run_roc(roc_args, data_dir);
    if (cmp_cmd->parsed()) return run_compare(cmp_cmd, cmp_args);
    if (report_cmd->parsed()) return run_report(report_args);
    return kExitInternal;  // unreachable: require_subcommand(1)
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return dispatch(argc, argv);
    } catch (const nids::NumericDivergenceError& e) {
        log_line(std::string("error: ") + e.what());
        return kExitDiverged;
    } catch (const nids::IoError& e) {
        log_line(std::string("error: ") + e.what());
        return kExitInput;
    } catch (const nids::MalformedRowError& e) {
        log_line(std::string("error: ") + e.what());
        return kExitInput;
    } catch (const nids::UnknownLabelError& e) {
        log_line(std::string("error: ") + e.what());
        return kExitInput;
    } catch (const nids::NonNumericValueError& e) {
        log_line(std::string("error: ") + e.what());
        return kExitInput;
    } catch (const nids::ConfigError& e) {
        log_line(std::string("error: ") + e.what());
        return kExitInput;
    } catch (const nids::SchemaMismatchError& e) {
        log_line(std::string("error: ") + e.what());
        return kExitInput;
    } catch (const nids::VersionMismatchError& e) {
        log_line(std::string("error: ") + e.what());
        return kExitInput;
    } catch (const nids::CorruptArtifactError& e) {
        log_line(std::string("error: ") + e.what());
        return kExitInput;
    } catch (const nids::InvalidFractionError& e) {
        log_line(std::string("error: ") + e.what());
        return kExitInput;
    } catch (const nids::EmptyDatasetError& e) {
        log_line(std::string("error: ") + e.what());
        return kExitInput;
    } catch (const nids::EmptyMatrixError& e) {
        log_line(std::string("error: ") + e.what());
        return kExitInput;
    } catch (const nids::DegenerateClassError& e) {
        log_line(std::string("error: ") + e.what());
        return kExitInput;
    } catch (const std::exception& e) {
        log_line(std::string("internal error: ") + e.what());
        return kExitInternal;
    }
}
