#pragma once

#include <cmath>
#include <cstdint>

namespace baoii {

// Deterministic, platform-independent generator: xoshiro256++ seeded through
// splitmix64. The standard library distributions are implementation-defined,
// so sampling here is done by explicit inverse transforms to keep outputs
// bit-identical everywhere.
inline std::uint64_t splitmix64_next(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

class Rng {
public:
    // stream selects an independent substream of the same seed, so parallel
    // replications reproduce the sequential result exactly.
    explicit Rng(std::uint64_t seed, std::uint64_t stream = 0) {
        std::uint64_t sm = seed ^ (stream * 0xD2B74407B1CE6E93ULL + 0x9E3779B97F4A7C15ULL);
        for (auto& w : s_) w = splitmix64_next(sm);
    }

    std::uint64_t next_u64() {
        const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
        const std::uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    // uniform on [0, 1)
    double next_unit() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    // uniform on (0, 1]; safe argument for log
    double next_unit_positive() {
        return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
    }

    // inverse-transform exponential with the given rate
    double next_exponential(double rate) {
        return -std::log(next_unit_positive()) / rate;
    }

private:
    static std::uint64_t rotl(std::uint64_t x, int k) {
        return (x << k) | (x >> (64 - k));
    }
    std::uint64_t s_[4];
};

} // namespace baoii
