#pragma once

#include <cstdint>

namespace superint {

// Counter-based generator: draw i is splitmix64(seed + (i+1) * golden), so a
// stream is a pure function of (seed, counter).
class CounterRng {
public:
    explicit CounterRng(std::uint64_t seed = 42) : seed_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = seed_ + (++counter_) * 0x9E3779B97F4A7C15ULL;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    // [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    std::uint64_t seed() const { return seed_; }
    std::uint64_t counter() const { return counter_; }

private:
    std::uint64_t seed_;
    std::uint64_t counter_ = 0;
};

}  // namespace superint
