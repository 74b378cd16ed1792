#pragma once

#include <cstdint>

namespace hessquot {

/// SplitMix64 generator.  Chosen over <random> engines so that streams are
/// cheap to fork per sample index and bitwise reproducible everywhere.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    /// Independent stream for (seed, index) pairs.
    static Rng fork(std::uint64_t seed, std::uint64_t index) {
        Rng r(seed);
        std::uint64_t mixed = r.next() ^ (index * 0x9E3779B97F4A7C15ULL + 0xD1B54A32D192ED03ULL);
        return Rng(mixed);
    }

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    /// Uniform double in [0, 1).
    double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    double uniform(double a, double b) { return a + (b - a) * uniform01(); }

private:
    std::uint64_t state_;
};

}  // namespace hessquot
