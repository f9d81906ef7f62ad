#pragma once

#include <cmath>
#include <cstdint>

namespace stocksent {

// Counter-based pseudorandom generator built on the SplitMix64 finalizer.
// Identical seeds give identical streams on every platform; split() derives
// statistically independent child streams, so parallel workers (for example
// hyperparameter search trials) can each own a reproducible stream without
// coordinating draw order.
//
// Distribution sampling is implemented from raw bits on purpose: the
// standard library distributions are implementation-defined and would break
// cross-platform reproducibility of seeded runs.
class SeededRng {
public:
    explicit SeededRng(std::uint64_t seed) : key_(mix(seed + GOLDEN)) {}

    // Raw 64 uniform bits; advances the counter by one.
    std::uint64_t next_u64() {
        counter_ += GOLDEN;
        return mix(key_ ^ counter_);
    }

    // Child stream identified by label. Independent of the parent's position.
    SeededRng split(std::uint64_t label) const {
        return SeededRng(from_key_tag{}, mix(key_ + mix(label + LABEL_SALT)));
    }

    // Uniform on [0, 1) with 53 random mantissa bits.
    double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // Uniform on [lo, hi).
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    // Log-uniform on [lo, hi), lo > 0.
    double log_uniform(double lo, double hi) {
        return std::exp(uniform(std::log(lo), std::log(hi)));
    }

    // Standard normal via Box-Muller (cosine branch only, two draws per call).
    double normal() {
        double u1 = uniform01();
        while (u1 <= 0.0) u1 = uniform01();
        double u2 = uniform01();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(TWO_PI * u2);
    }

    // Uniform integer in [0, n), n >= 1. Rejection keeps the draw unbiased.
    std::uint64_t below(std::uint64_t n) {
        const std::uint64_t threshold = (0ULL - n) % n;
        for (;;) {
            std::uint64_t r = next_u64();
            if (r >= threshold) return r % n;
        }
    }

private:
    struct from_key_tag {};
    SeededRng(from_key_tag, std::uint64_t key) : key_(key) {}

    static std::uint64_t mix(std::uint64_t z) {
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    static constexpr std::uint64_t GOLDEN = 0x9E3779B97F4A7C15ULL;
    static constexpr std::uint64_t LABEL_SALT = 0xD1B54A32D192ED03ULL;
    static constexpr double TWO_PI = 6.283185307179586476925286766559;

    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

}  // namespace stocksent
