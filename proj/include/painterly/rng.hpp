#pragma once

#include <cstdint>
#include <random>
#include <string>

namespace painterly {

/// Seedable generator state carried explicitly through the simulation.
/// The engine is std::mt19937_64 (bit-exact across standard libraries); the
/// mappings to reals and bounded integers are done here rather than through
/// <random> distributions, whose output is implementation-defined.
class Rng {
public:
    Rng() : engine_(kDefaultSeed) {}
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform in [0, 1) with 53 random bits.
    double uniform01() { return double(engine_() >> 11) * 0x1.0p-53; }

    /// Uniform in [lo, hi).
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    /// Unbiased uniform integer in [0, bound); bound must be positive.
    std::uint64_t below(std::uint64_t bound) {
        const std::uint64_t threshold = (0 - bound) % bound;
        for (;;) {
            const auto r = engine_();
            if (r >= threshold) return r % bound;
        }
    }

    /// Textual engine state, stable across runs; used for hashing.
    std::string serialize() const;

    friend bool operator==(const Rng& a, const Rng& b) { return a.engine_ == b.engine_; }

private:
    static constexpr std::uint64_t kDefaultSeed = 42;
    std::mt19937_64 engine_;
};

}  // namespace painterly
