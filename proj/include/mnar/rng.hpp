#pragma once

#include <cstdint>

namespace mnar {

/// Seed for a deterministic pseudorandom stream. Identical seed and
/// parameters give bit-identical outputs across runs and platforms.
using Seed = std::uint64_t;

/// splitmix64 stream. Small, fast, and fully portable; every random
/// quantity in the library flows through this so results never depend
/// on implementation-defined <random> distributions.
class Rng {
public:
    explicit Rng(Seed seed) : state_(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    /// Uniform double in [0,1) with 53 random bits.
    double uniform01() { return double(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    bool bernoulli(double p) { return uniform01() < p; }

    /// Derives an independent stream for a named sub-purpose, so masks,
    /// noise, and jitter are reproducible independently of one another.
    Rng split(std::uint64_t stream_tag) {
        std::uint64_t s = state_ ^ (0x2545f4914f6cdd1dULL * (stream_tag + 1));
        Rng child(s);
        child.next_u64();
        return child;
    }

private:
    std::uint64_t state_;
};

}  // namespace mnar
