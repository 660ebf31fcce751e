// End-to-end coverage of the installed binaries: every test spawns the real
// CLI and asserts on exit codes, stream routing, and file outputs.
#include <sys/wait.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <doctest.h>
#include <json.hpp>

#include "nids/preprocess.hpp"
#include "nids/tensor.hpp"
#include "test_util.hpp"

namespace fs = std::filesystem;

namespace {

int run_cmd(const std::string& cmd) {
    const int status = std::system(cmd.c_str());
    REQUIRE(status != -1);
    REQUIRE(WIFEXITED(status));
    return WEXITSTATUS(status);
}

std::string quoted(const fs::path& p) { return "'" + p.string() + "'"; }

std::string read_file(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

// One synthetic train/test pair + preprocess outputs, shared by the
// heavier cases below.
struct CliFixture {
    testutil::TempDir dir;
    fs::path train_csv, test_csv, pipeline, matrix, out, err;

    CliFixture() {
        train_csv = dir.file("train.csv");
        test_csv = dir.file("test.csv");
        pipeline = dir.file("pipeline.json");
        matrix = dir.file("matrix.json");
        out = dir.file("stdout.txt");
        err = dir.file("stderr.txt");

        const std::string synth = std::string(NIDS_SYNTH_BIN) + " --train-out " +
                                  quoted(train_csv) + " --test-out " + quoted(test_csv) +
                                  " --train-rows 800 --test-rows 250 --seed 42 > /dev/null";
        REQUIRE(run_cmd(synth) == 0);

        const std::string pre = std::string(NIDS_CLI_BIN) + " preprocess --dataset nslkdd" +
                                " --train-csv " + quoted(train_csv) + " --taxonomy " +
                                NIDS_TAXONOMY_KDD + " --out-pipeline " + quoted(pipeline) +
                                " --out-matrix " + quoted(matrix) + " > " + quoted(out) + " 2> " +
                                quoted(err);
        REQUIRE(run_cmd(pre) == 0);
    }

    std::string nids() const { return NIDS_CLI_BIN; }
    std::string taxonomy() const { return std::string(" --taxonomy ") + NIDS_TAXONOMY_KDD; }
};

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("cli: usage errors exit 2, help exits 0") {
    CHECK(run_cmd(std::string(NIDS_CLI_BIN) + " > /dev/null 2>&1") == 2);
    CHECK(run_cmd(std::string(NIDS_CLI_BIN) + " --help > /dev/null 2>&1") == 0);
    CHECK(run_cmd(std::string(NIDS_CLI_BIN) + " train --help > /dev/null 2>&1") == 0);
    CHECK(run_cmd(std::string(NIDS_CLI_BIN) + " --no-such-flag > /dev/null 2>&1") == 2);
    CHECK(run_cmd(std::string(NIDS_CLI_BIN) + " frobnicate > /dev/null 2>&1") == 2);

    testutil::TempDir dir;
    // Missing input file is an input error, not a crash.
    const std::string missing = std::string(NIDS_CLI_BIN) +
                                " preprocess --dataset nslkdd --train-csv " +
                                quoted(dir.file("nope.csv")) + " --taxonomy " + NIDS_TAXONOMY_KDD +
                                " --out-pipeline " + quoted(dir.file("p.json")) +
                                " --out-matrix " + quoted(dir.file("m.json")) +
                                " > /dev/null 2>&1";
    CHECK(run_cmd(missing) == 2);
}

TEST_CASE("cli: preprocess reports the canonical encoded width on stdout only") {
    CliFixture fx;
    const nlohmann::json summary = nlohmann::json::parse(read_file(fx.out));
    CHECK(summary.at("encoded_width") == 122);
    CHECK(summary.at("rows") == 800);
    CHECK(summary.at("class_distribution").contains("normal"));
    // Logs belong on stderr; stdout held exactly the JSON document.
    CHECK(read_file(fx.err).find("encoded_width") == std::string::npos);
    CHECK(fs::exists(fx.pipeline));
    CHECK(fs::exists(fx.matrix));
}

TEST_CASE("cli: train emits epoch lines on stderr and a reproducible artifact") {
    CliFixture fx;
    const fs::path model_a = fx.dir.file("model_a.json");
    const fs::path model_b = fx.dir.file("model_b.json");
    const std::string base = fx.nids() + " train --pipeline " + quoted(fx.pipeline) +
                             " --matrix " + quoted(fx.matrix) +
                             " --dataset nslkdd --model dnn --hidden-dim 16 --epochs 2" +
                             " --batch-size 64 --seed 9";

    CHECK(run_cmd(base + " --out-model " + quoted(model_a) + " > " + quoted(fx.out) + " 2> " +
                  quoted(fx.err)) == 0);

    const std::string err_text = read_file(fx.err);
    CHECK(err_text.find("epoch,1,loss,") != std::string::npos);
    CHECK(err_text.find("epoch,2,loss,") != std::string::npos);
    const nlohmann::json summary = nlohmann::json::parse(read_file(fx.out));
    CHECK(summary.at("epochs") == 2);
    CHECK(summary.at("param_checksum").is_string());
    CHECK(summary.at("final_loss").is_number());

    CHECK(run_cmd(base + " --out-model " + quoted(model_b) + " > /dev/null 2> /dev/null") == 0);
    CHECK(read_file(model_a) == read_file(model_b));  // same seed, byte-identical

    // epochs must be positive: config error -> exit 2.
    CHECK(run_cmd(fx.nids() + " train --pipeline " + quoted(fx.pipeline) + " --matrix " +
                  quoted(fx.matrix) + " --dataset nslkdd --epochs 0 --seed 1 --out-model " +
                  quoted(fx.dir.file("x.json")) + " > /dev/null 2>&1") == 2);
    // seed is mandatory.
    CHECK(run_cmd(fx.nids() + " train --pipeline " + quoted(fx.pipeline) + " --matrix " +
                  quoted(fx.matrix) + " --dataset nslkdd --epochs 1 --out-model " +
                  quoted(fx.dir.file("x.json")) + " > /dev/null 2>&1") == 2);
}

TEST_CASE("cli: evaluate, roc, and report round trip") {
    CliFixture fx;
    const fs::path model = fx.dir.file("model.json");
    CHECK(run_cmd(fx.nids() + " train --pipeline " + quoted(fx.pipeline) + " --matrix " +
                  quoted(fx.matrix) +
                  " --dataset nslkdd --model dnn --hidden-dim 16 --epochs 3 --batch-size 64" +
                  " --seed 4 --out-model " + quoted(model) + " > /dev/null 2> /dev/null") == 0);

    const fs::path metrics_json = fx.dir.file("metrics.json");
    const fs::path metrics_csv = fx.dir.file("metrics.csv");
    const fs::path preds = fx.dir.file("preds.csv");
    CHECK(run_cmd(fx.nids() + " evaluate --model " + quoted(model) + " --test-csv " +
                  quoted(fx.test_csv) + fx.taxonomy() + " --out-metrics " + quoted(metrics_json) +
                  " --out-metrics-csv " + quoted(metrics_csv) + " --out-predictions " +
                  quoted(preds) + " > " + quoted(fx.out) + " 2> /dev/null") == 0);

    const nlohmann::json metrics = nlohmann::json::parse(read_file(metrics_json));
    CHECK(metrics.at("overall").contains("accuracy"));
    CHECK(metrics.at("overall").contains("detection_rate"));
    CHECK(metrics.at("overall").contains("far"));
    CHECK(nlohmann::json::parse(read_file(fx.out)) == metrics);  // stdout mirrors the file
    CHECK(read_file(preds).rfind("row,true_class,pred_class,p_DoS", 0) == 0);
    CHECK(read_file(metrics_csv).find("accuracy_pct") != std::string::npos);

    // Evaluating requires exactly one input source.
    CHECK(run_cmd(fx.nids() + " evaluate --model " + quoted(model) + " > /dev/null 2>&1") == 2);
    CHECK(run_cmd(fx.nids() + " evaluate --model " + quoted(model) + " --matrix " +
                  quoted(fx.matrix) + " --test-csv " + quoted(fx.test_csv) + fx.taxonomy() +
                  " > /dev/null 2>&1") == 2);

    const fs::path roc_dir = fx.dir.path() / "roc";
    CHECK(run_cmd(fx.nids() + " roc --model " + quoted(model) + " --test-csv " +
                  quoted(fx.test_csv) + fx.taxonomy() + " --out-dir " + quoted(roc_dir) + " > " +
                  quoted(fx.out) + " 2> /dev/null") == 0);
    const nlohmann::json roc = nlohmann::json::parse(read_file(fx.out));
    CHECK(roc.at("curves").contains("DoS"));
    for (const auto& [name, entry] : roc.at("curves").items()) {
        const fs::path curve_path = entry.at("path").get<std::string>();
        CAPTURE(name);
        CHECK(fs::exists(curve_path));
        CHECK(read_file(curve_path).rfind("fpr,tpr\n", 0) == 0);
    }

    const fs::path report_json = fx.dir.file("report.json");
    const fs::path report_csv = fx.dir.file("report.csv");
    CHECK(run_cmd(fx.nids() + " report --run 'dnn smoke,nslkdd," + metrics_json.string() + "'" +
                  " --out-json " + quoted(report_json) + " --out-csv " + quoted(report_csv) +
                  " > /dev/null 2> /dev/null") == 0);
    const std::string report_text = read_file(report_csv);
    CHECK(report_text.find("this_run,dnn smoke,nslkdd,") != std::string::npos);
    CHECK(report_text.find("98.73,99.57,98.87,2.33") != std::string::npos);
}

TEST_CASE("cli: compare-optimizers ranks all seven") {
    CliFixture fx;
    const fs::path cmp_json = fx.dir.file("cmp.json");
    CHECK(run_cmd(fx.nids() + " compare-optimizers --pipeline " + quoted(fx.pipeline) +
                  " --matrix " + quoted(fx.matrix) +
                  " --dataset nslkdd --model dnn --hidden-dim 8 --epochs 1 --batch-size 64" +
                  " --seed 2 --out-json " + quoted(cmp_json) + " > " + quoted(fx.out) + " 2> " +
                  quoted(fx.err)) == 0);

    const nlohmann::json cmp = nlohmann::json::parse(read_file(cmp_json));
    REQUIRE(cmp.at("rows").size() == 7);
    CHECK(cmp.at("rows")[0].at("rank") == 1);
    CHECK(cmp.at("adamax_first").is_boolean());
    const std::string err_text = read_file(fx.err);
    for (const char* name : {"sgd", "adagrad", "adadelta", "rmsprop", "adam", "adamax", "nadam"}) {
        CAPTURE(name);
        CHECK(err_text.find(std::string("# optimizer ") + name) != std::string::npos);
    }
}

TEST_CASE("cli: numeric divergence exits 3") {
    testutil::TempDir dir;
    nids::PipelineState pipe;
    pipe.schema_name = "nslkdd";
    pipe.encoder.feature_count = 3;
    pipe.normalizer.min = {0.0, 0.0, 0.0};
    pipe.normalizer.max = {1.0, 1.0, 1.0};
    nids::save_pipeline(dir.file("pipe.json"), pipe);

    nids::FeatureMatrix m;
    m.values = nids::Tensor2(8, 3);
    m.values.at(0, 0) = std::nan("");
    m.class_indices.assign(8, 4);
    m.class_indices[0] = 0;
    nids::save_matrix(dir.file("matrix.json"), m);

    // tanh propagates the injected NaN into the loss (relu would mask it).
    const std::string cmd = std::string(NIDS_CLI_BIN) + " train --pipeline " +
                            quoted(dir.file("pipe.json")) + " --matrix " +
                            quoted(dir.file("matrix.json")) +
                            " --dataset nslkdd --activation tanh --epochs 1 --batch-size 8" +
                            " --seed 1 --out-model " + quoted(dir.file("model.json")) +
                            " > /dev/null 2> " + quoted(dir.file("err.txt"));
    CHECK(run_cmd(cmd) == 3);
    CHECK(read_file(dir.file("err.txt")).find("non-finite") != std::string::npos);
}

TEST_CASE("cli: corrupted artifacts are input errors") {
    CliFixture fx;
    const fs::path bogus = fx.dir.file("bogus.json");
    std::ofstream(bogus) << "{\"format\": \"wrong\"}\n";
    CHECK(run_cmd(fx.nids() + " train --pipeline " + quoted(fx.pipeline) + " --matrix " +
                  quoted(bogus) + " --dataset nslkdd --epochs 1 --seed 1 --out-model " +
                  quoted(fx.dir.file("m.json")) + " > /dev/null 2>&1") == 2);
    CHECK(run_cmd(fx.nids() + " evaluate --model " + quoted(bogus) + " --matrix " +
                  quoted(fx.matrix) + " > /dev/null 2>&1") == 2);
}

}  // TEST_SUITE
