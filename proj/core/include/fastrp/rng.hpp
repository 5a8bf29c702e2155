#pragma once

#include <cmath>
#include <cstdint>

namespace fastrp {

/// SplitMix64 finalizer. Bijective on 64-bit values.
inline std::uint64_t mix64(std::uint64_t z) noexcept {
    z += 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

/// Counter-based generator with 64-bit state: value i of stream
/// (seed, stream) is mix64(key + i*phi) where key = mix64(mix64(seed) ^
/// mix64-derived stream constant. Any (seed, stream) pair can be
/// regenerated in isolation, which makes sampling embarrassingly
/// parallel and byte-reproducible for any worker count.
class CounterRng {
public:
    explicit CounterRng(std::uint64_t seed, std::uint64_t stream = 0) noexcept
        : key_(mix64(mix64(seed) ^ mix64(stream + 0x632BE59BD9B4E019ULL))) {}

    std::uint64_t next_u64() noexcept {
        return mix64(key_ + 0x9E3779B97F4A7C15ULL * ++counter_);
    }

    /// Uniform double in [0, 1).
    double next_double() noexcept {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    /// Uniform double in (0, 1]. Safe as a log() argument.
    double next_double_open() noexcept {
        return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
    }

    /// Unbiased uniform integer in [0, bound). bound must be > 0.
    std::uint64_t next_below(std::uint64_t bound) noexcept {
        const std::uint64_t threshold = (0 - bound) % bound;
        for (;;) {
            const std::uint64_t x = next_u64();
            if (x >= threshold) return x % bound;
        }
    }

    bool next_bool() noexcept { return (next_u64() & 1) != 0; }

    /// Standard normal pair via Box-Muller. No rejection, so the
    /// number of draws consumed is fixed.
    void next_normal_pair(double& z0, double& z1) noexcept {
        const double u1 = next_double_open();
        const double u2 = next_double();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double t = 6.283185307179586476925287 * u2;
        z0 = r * std::cos(t);
        z1 = r * std::sin(t);
    }

private:
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

}  // namespace fastrp
