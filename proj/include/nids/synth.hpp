#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>

namespace nids {

// Deterministic generator for schema-faithful KDD-family CSV files, used when
// the official NSL-KDD / KDD'99 files are not available locally. The replica
// keeps the real categorical vocabularies (3 protocols, 70 services, 11
// flags), the real attack-label names (including the test-only novel
// attacks), the official per-class proportions, and class-conditional feature
// profiles that make the classes learnable. It is NOT the official benchmark
// and carries none of its measurement value; point NIDS_NSLKDD_TRAIN /
// NIDS_NSLKDD_TEST at the official files to use them instead.
struct SynthSpec {
    std::size_t train_rows = 25000;
    std::size_t test_rows = 5000;
    std::uint64_t seed = 7;
    bool kdd99_style = false;  // trailing '.' on labels, no difficulty column
};

void write_synthetic_kdd(const std::filesystem::path& train_path,
                         const std::filesystem::path& test_path, const SynthSpec& spec);

// Vocabularies of the real datasets (lexicographic order not guaranteed).
std::span<const char* const> kdd_protocols();  // 3
std::span<const char* const> kdd_services();   // 70
std::span<const char* const> kdd_flags();      // 11

// Train/test file locations: the NIDS_NSLKDD_TRAIN / NIDS_NSLKDD_TEST
// environment variables take precedence (both must be set); otherwise a
// synthetic pair is generated under cache_dir (reused if already present,
// since generation is deterministic).
struct NslKddFiles {
    std::filesystem::path train;
    std::filesystem::path test;
    bool synthetic = true;
};

NslKddFiles resolve_nslkdd_files(const std::filesystem::path& cache_dir,
                                 std::size_t train_rows = 25000, std::size_t test_rows = 5000);

}  // namespace nids
