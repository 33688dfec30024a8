#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace fogfed {

/// Seeded random stream. Draws are built from raw 64-bit engine output so the
/// sequence is identical across standard library implementations.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform on [0, 1) with 53 bits of resolution.
    double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    double exponential(double rate);

private:
    std::mt19937_64 engine_;
};

/// SplitMix64 finalizer; a bijection on 64-bit integers.
std::uint64_t mix64(std::uint64_t x);

/// FNV-1a over the bytes of a string.
std::uint64_t fnv1a64(std::string_view text);

} // namespace fogfed
