#pragma once

#include <cstdint>
#include <cstddef>

namespace regidx {

// Deterministic 64-bit generator (splitmix64). Self-contained so that seeded
// runs reproduce bit-for-bit regardless of the standard library in use.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // Uniform in [0, 1).
    double next_double() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    // Uniform in [0, n), unbiased via rejection.
    std::size_t next_index(std::size_t n) {
        const std::uint64_t bound = n;
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
        std::uint64_t r;
        do {
            r = next_u64();
        } while (r >= limit);
        return static_cast<std::size_t>(r % bound);
    }

    // Independent substream for restart r of a seeded run.
    static std::uint64_t mix(std::uint64_t seed, std::uint64_t stream) {
        Rng g(seed ^ (0x632be59bd9b4e019ULL * (stream + 1)));
        return g.next_u64();
    }

private:
    std::uint64_t state_;
};

} // namespace regidx
