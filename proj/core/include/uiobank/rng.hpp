#pragma once

#include <cstdint>
#include <random>

namespace uiobank::rng {

// Stream layout: every randomized signal draws from its own engine so that
// traces are reproducible across platforms and insensitive to evaluation
// order. Stream ids (1-based channels):
//   0                      initial state
//   100 + channel          known input u
//   200 + channel          actuator attack
//   300 + channel          sensor attack
inline constexpr std::uint64_t kInitialStateStream = 0;
inline constexpr std::uint64_t kInputStreamBase = 100;
inline constexpr std::uint64_t kActuatorAttackStreamBase = 200;
inline constexpr std::uint64_t kSensorAttackStreamBase = 300;

// splitmix64 finalizer; mixes the scenario seed with a stream id.
std::uint64_t mix(std::uint64_t seed, std::uint64_t stream);

// One mt19937_64 engine per stream. The uniform and gaussian mappings are
// implemented from raw 64-bit draws (53-bit mantissa scaling, Box-Muller)
// because the standard-library distributions are not bit-portable.
class Stream {
public:
    Stream(std::uint64_t seed, std::uint64_t stream_id) : engine_(mix(seed, stream_id)) {}

    double uniform(double low, double high);
    double gaussian(double mean, double stddev);

private:
    double next_unit();        // [0, 1)
    double next_unit_open();   // (0, 1]

    std::mt19937_64 engine_;
};

} // namespace uiobank::rng
