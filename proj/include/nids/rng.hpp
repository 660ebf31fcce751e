#pragma once

#include <cstdint>
#include <vector>

namespace nids {

// splitmix64 generator. Chosen over std::mt19937_64 + std distributions
// because the distribution adapters in <random> are implementation-defined;
// this keeps every seeded run bit-identical across compilers and platforms.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64();

    // Uniform in [0, 1), 53-bit resolution.
    double next_double();

    // Uniform in [lo, hi).
    double next_uniform(double lo, double hi);

    // Standard normal via Box-Muller (pair cached).
    double next_gaussian();

    // Uniform integer in [0, n). n must be > 0.
    std::uint64_t next_below(std::uint64_t n);

private:
    std::uint64_t state_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

// Derives an independent seed for a named stream, so that e.g. the shuffle
// of epoch 7 is a pure function of (seed, 7) regardless of what else consumed
// random numbers.
std::uint64_t derive_stream(std::uint64_t seed, std::uint64_t stream);

// Deterministic Fisher-Yates.
void shuffle_indices(std::vector<std::size_t>& indices, Rng& rng);

}  // namespace nids
