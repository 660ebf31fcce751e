#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <doctest.h>

#include "nids/dataset.hpp"
#include "nids/errors.hpp"
#include "nids/synth.hpp"
#include "test_util.hpp"

using namespace nids;

namespace {

std::vector<std::vector<std::string>> read_rows(const std::filesystem::path& p) {
    std::ifstream in(p);
    REQUIRE(in.good());
    std::vector<std::vector<std::string>> rows;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty()) rows.push_back(split_csv_line(line));
    }
    return rows;
}

std::string read_bytes(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

template <typename Span>
std::set<std::string> as_set(Span values) {
    std::set<std::string> out;
    for (const char* v : values) out.insert(v);
    return out;
}

struct EnvGuard {
    std::string name;
    std::string old_value;
    bool had = false;

    explicit EnvGuard(const std::string& var) : name(var) {
        if (const char* v = std::getenv(var.c_str())) {
            had = true;
            old_value = v;
        }
    }
    ~EnvGuard() {
        if (had) {
            ::setenv(name.c_str(), old_value.c_str(), 1);
        } else {
            ::unsetenv(name.c_str());
        }
    }
};

}  // namespace

TEST_SUITE("synth") {

TEST_CASE("synthetic nsl-kdd replica: shape, vocabularies, label coverage") {
    testutil::TempDir dir;
    SynthSpec spec;
    spec.train_rows = 3000;
    spec.test_rows = 800;
    spec.seed = 5;
    const auto train_path = dir.file("train.txt");
    const auto test_path = dir.file("test.txt");
    write_synthetic_kdd(train_path, test_path, spec);

    const auto train_rows = read_rows(train_path);
    const auto test_rows = read_rows(test_path);
    REQUIRE(train_rows.size() == 3000);
    REQUIRE(test_rows.size() == 800);
    for (const auto& row : train_rows) REQUIRE(row.size() == 43);
    for (const auto& row : test_rows) REQUIRE(row.size() == 43);

    const AttackTaxonomy tax =
        load_taxonomy(NIDS_TAXONOMY_KDD, builtin_class_names(SchemaName::NslKdd));

    const std::set<std::string> protocols = as_set(kdd_protocols());
    const std::set<std::string> services = as_set(kdd_services());
    const std::set<std::string> flags = as_set(kdd_flags());
    REQUIRE(protocols.size() == 3);
    REQUIRE(services.size() == 70);
    REQUIRE(flags.size() == 11);

    std::set<std::string> seen_services;
    std::set<std::string> seen_flags;
    std::set<std::string> seen_protocols;
    for (const auto& rows : {train_rows, test_rows}) {
        for (const auto& row : rows) {
            CHECK(protocols.count(row[1]) == 1);
            CHECK(services.count(row[2]) == 1);
            CHECK(flags.count(row[3]) == 1);
            CHECK(tax.raw_to_class.count(row[41]) == 1);
            const int difficulty = std::stoi(row[42]);
            CHECK(difficulty >= 15);
            CHECK(difficulty <= 21);
        }
    }
    for (const auto& row : train_rows) {
        seen_protocols.insert(row[1]);
        seen_services.insert(row[2]);
        seen_flags.insert(row[3]);
    }
    // The training file exercises the full categorical vocabularies so a
    // fitted one-hot encoder reaches the canonical 122-column width.
    CHECK(seen_protocols == protocols);
    CHECK(seen_services == services);
    CHECK(seen_flags == flags);

    std::set<std::string> test_services;
    for (const auto& row : test_rows) test_services.insert(row[2]);
    CHECK(test_services.size() < services.size());  // unseen-category path stays exercised
}

TEST_CASE("synthetic replica: novel attacks only in the test file") {
    testutil::TempDir dir;
    SynthSpec spec;
    spec.train_rows = 4000;
    spec.test_rows = 1500;
    spec.seed = 9;
    write_synthetic_kdd(dir.file("train.txt"), dir.file("test.txt"), spec);

    std::set<std::string> train_labels;
    std::set<std::string> test_labels;
    for (const auto& row : read_rows(dir.file("train.txt"))) train_labels.insert(row[41]);
    for (const auto& row : read_rows(dir.file("test.txt"))) test_labels.insert(row[41]);

    for (const std::string novel : {"mscan", "apache2", "processtable", "httptunnel", "snmpguess"}) {
        CAPTURE(novel);
        CHECK(train_labels.count(novel) == 0);
    }
    std::set<std::string> test_only;
    for (const auto& label : test_labels) {
        if (train_labels.count(label) == 0) test_only.insert(label);
    }
    CHECK(!test_only.empty());
    CHECK(train_labels.count("normal") == 1);
    CHECK(test_labels.count("normal") == 1);
}

TEST_CASE("synthetic replica: approximate official class proportions") {
    testutil::TempDir dir;
    SynthSpec spec;
    spec.train_rows = 10000;
    spec.test_rows = 100;
    spec.seed = 3;
    write_synthetic_kdd(dir.file("train.txt"), dir.file("test.txt"), spec);

    const AttackTaxonomy tax =
        load_taxonomy(NIDS_TAXONOMY_KDD, builtin_class_names(SchemaName::NslKdd));
    std::map<int, int> counts;
    for (const auto& row : read_rows(dir.file("train.txt"))) {
        counts[tax.raw_to_class.at(row[41])] += 1;
    }
    const double n = 10000.0;
    // Official NSL-KDD training mix: ~53% normal, ~37% DoS, ~9% Probe, ~0.8% R2L, U2R trace.
    CHECK(counts[4] / n == doctest::Approx(0.53).epsilon(0.15));
    CHECK(counts[0] / n == doctest::Approx(0.37).epsilon(0.15));
    CHECK(counts[1] / n == doctest::Approx(0.09).epsilon(0.25));
    CHECK(counts[2] > 0);
    CHECK(counts[3] > 0);
}

TEST_CASE("synthetic replica: byte-identical determinism and kdd99 styling") {
    testutil::TempDir dir;
    SynthSpec spec;
    spec.train_rows = 500;
    spec.test_rows = 200;
    spec.seed = 21;
    write_synthetic_kdd(dir.file("a_train.txt"), dir.file("a_test.txt"), spec);
    write_synthetic_kdd(dir.file("b_train.txt"), dir.file("b_test.txt"), spec);
    CHECK(read_bytes(dir.file("a_train.txt")) == read_bytes(dir.file("b_train.txt")));
    CHECK(read_bytes(dir.file("a_test.txt")) == read_bytes(dir.file("b_test.txt")));

    spec.seed = 22;
    write_synthetic_kdd(dir.file("c_train.txt"), dir.file("c_test.txt"), spec);
    CHECK(read_bytes(dir.file("a_train.txt")) != read_bytes(dir.file("c_train.txt")));

    spec.kdd99_style = true;
    write_synthetic_kdd(dir.file("k_train.txt"), dir.file("k_test.txt"), spec);
    const auto kdd_rows = read_rows(dir.file("k_train.txt"));
    REQUIRE(!kdd_rows.empty());
    for (const auto& row : kdd_rows) {
        REQUIRE(row.size() == 42);  // no difficulty column
        REQUIRE(!row[41].empty());
        CHECK(row[41].back() == '.');
    }
}

TEST_CASE("resolve_nslkdd_files: cache reuse and env override") {
    EnvGuard train_guard("NIDS_NSLKDD_TRAIN");
    EnvGuard test_guard("NIDS_NSLKDD_TEST");
    ::unsetenv("NIDS_NSLKDD_TRAIN");
    ::unsetenv("NIDS_NSLKDD_TEST");

    testutil::TempDir dir;
    const auto cache = dir.path() / "cache";
    const NslKddFiles first = resolve_nslkdd_files(cache, 600, 150);
    CHECK(first.synthetic);
    CHECK(std::filesystem::exists(first.train));
    CHECK(std::filesystem::exists(first.test));
    CHECK(read_rows(first.train).size() == 600);

    const auto stamp = std::filesystem::last_write_time(first.train);
    const NslKddFiles second = resolve_nslkdd_files(cache, 600, 150);
    CHECK(second.train == first.train);
    CHECK(std::filesystem::last_write_time(second.train) == stamp);  // reused, not rebuilt

    ::setenv("NIDS_NSLKDD_TRAIN", first.train.string().c_str(), 1);
    CHECK_THROWS_AS(resolve_nslkdd_files(cache, 600, 150), ConfigError);  // half an override

    ::setenv("NIDS_NSLKDD_TEST", first.test.string().c_str(), 1);
    const NslKddFiles overridden = resolve_nslkdd_files(cache, 600, 150);
    CHECK_FALSE(overridden.synthetic);
    CHECK(overridden.train == first.train);
    CHECK(overridden.test == first.test);
}

}  // TEST_SUITE
