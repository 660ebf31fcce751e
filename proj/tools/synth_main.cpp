// nids-synth: writes a deterministic, schema-faithful KDD-family train/test
// CSV pair for pipeline exercises and CI. See synth.hpp for what the replica
// does and does not preserve.

#include <cstdlib>
#include <exception>
#include <filesystem>
#include <iostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "nids/errors.hpp"
#include "nids/synth.hpp"

int main(int argc, char** argv) {
    CLI::App app{"deterministic synthetic KDD-family dataset generator"};
    nids::SynthSpec spec;
    std::filesystem::path train_out = "synth_train.csv";
    std::filesystem::path test_out = "synth_test.csv";
    app.add_option("--train-out", train_out, "training CSV path");
    app.add_option("--test-out", test_out, "test CSV path");
    app.add_option("--train-rows", spec.train_rows, "training rows (min 500)");
    app.add_option("--test-rows", spec.test_rows, "test rows (min 100)");
    app.add_option("--seed", spec.seed, "generator seed");
    app.add_flag("--kdd99-style", spec.kdd99_style,
                 "KDD'99 layout: trailing '.' on labels, no difficulty column");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        nids::write_synthetic_kdd(train_out, test_out, spec);
    } catch (const nids::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 1;
    }

    const nlohmann::json summary = {{"train_path", train_out.string()},
                                    {"test_path", test_out.string()},
                                    {"train_rows", spec.train_rows},
                                    {"test_rows", spec.test_rows},
                                    {"seed", spec.seed}};
    std::cout << summary.dump(2) << "\n";
    return 0;
}
