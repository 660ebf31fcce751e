#include "nids/rng.hpp"

#include <cmath>

namespace nids {

std::uint64_t Rng::next_u64() {
    // splitmix64 (Steele, Lea, Flood 2014); public-domain reference constants.
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

double Rng::next_double() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double Rng::next_uniform(double lo, double hi) {
    return lo + (hi - lo) * next_double();
}

double Rng::next_gaussian() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    double u1 = next_double();
    double u2 = next_double();
    while (u1 <= 0.0) u1 = next_double();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * 3.14159265358979323846 * u2;
    spare_ = r * std::sin(theta);
    has_spare_ = true;
    return r * std::cos(theta);
}

std::uint64_t Rng::next_below(std::uint64_t n) {
    // Rejection sampling keeps the draw unbiased and deterministic.
    const std::uint64_t limit = ~0ULL - (~0ULL % n);
    std::uint64_t x = next_u64();
    while (x >= limit) x = next_u64();
    return x % n;
}

std::uint64_t derive_stream(std::uint64_t seed, std::uint64_t stream) {
    Rng mix(seed ^ (0x6a09e667f3bcc909ULL + stream * 0x9e3779b97f4a7c15ULL));
    return mix.next_u64();
}

void shuffle_indices(std::vector<std::size_t>& indices, Rng& rng) {
    for (std::size_t i = indices.size(); i > 1; --i) {
        const std::size_t j = static_cast<std::size_t>(rng.next_below(i));
        std::swap(indices[i - 1], indices[j]);
    }
}

}  // namespace nids
