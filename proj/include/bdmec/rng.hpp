#pragma once

#include <cstdint>
#include <random>

namespace bdmec {

// splitmix64; used to derive independent stream seeds from a base seed.
inline std::uint64_t mix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream) {
    return mix64(base ^ mix64(stream + 0x632BE59BD9B4E019ULL));
}

// Deterministic generator. std::mt19937_64 output is pinned by the standard,
// and all value mappings are done by hand here because the std distribution
// objects are implementation-defined and would break cross-toolchain
// reproducibility of frozen test values.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    // Uniform integer in [lo, hi], inclusive. Rejection sampling, unbiased.
    std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) {
        const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
        if (span == 0) return static_cast<std::int64_t>(next_u64());  // full 64-bit range
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % span;
        std::uint64_t v;
        do {
            v = next_u64();
        } while (v >= limit);
        return lo + static_cast<std::int64_t>(v % span);
    }

    // Uniform real in [0, 1) with 53 random bits.
    double unit_real() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double uniform_real(double lo, double hi) { return lo + (hi - lo) * unit_real(); }

    // Uniform on the open interval (-1/2, 1/2); never returns the endpoints.
    double symmetric_unit() {
        return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53 - 0.5;
    }

private:
    std::mt19937_64 engine_;
};

}  // namespace bdmec
