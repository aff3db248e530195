// splitmix64: the named, seedable, splittable generator recorded in every
// Monte Carlo output. Substreams come from hashing (seed, index), so sweep
// points and trial partitions are independent and reproducible bit for bit.

#pragma once

#include <cstdint>

namespace ghzpurify {

struct SplitMix64 {
    uint64_t state = 0;

    explicit SplitMix64(uint64_t seed = 0) : state(seed) {}

    uint64_t next() {
        uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    // Uniform in [0, 1) with 53 random mantissa bits.
    double next_double() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    // Independent substream for (this seed, index).
    static SplitMix64 substream(uint64_t seed, uint64_t index) {
        SplitMix64 mixer(seed);
        uint64_t base = mixer.next();
        SplitMix64 idx(index + 0x9E3779B97F4A7C15ULL);
        return SplitMix64(base ^ idx.next());
    }
};

inline const char* rng_algorithm_id() { return "splitmix64"; }

} // namespace ghzpurify
