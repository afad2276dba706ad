#include "uiobank/rng.hpp"

#include <cmath>
#include <numbers>

namespace uiobank::rng {

std::uint64_t mix(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

double Stream::next_unit() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double Stream::next_unit_open() {
    return (static_cast<double>(engine_() >> 11) + 1.0) * 0x1.0p-53;
}

double Stream::uniform(double low, double high) { return low + (high - low) * next_unit(); }

double Stream::gaussian(double mean, double stddev) {
    // Box-Muller, cosine branch only: two draws per sample, stateless.
    const double u1 = next_unit_open();
    const double u2 = next_unit();
    return mean + stddev * std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

} // namespace uiobank::rng
