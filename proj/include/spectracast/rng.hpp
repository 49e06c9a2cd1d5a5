// SPDX-License-Identifier: Apache-2.0
// Copyright Contributors to the SpectraCast Project.

#pragma once

#include <cmath>
#include <cstdint>
#include <utility>
#include <vector>

namespace spectracast {

// Counter-based pseudorandom generator. Every draw is a pure function of
// (seed, stream, counter): the 64-bit key is hashed with the splitmix64
// finalizer, so independent streams and out-of-order pixel generation give
// the same values as sequential generation. Integer-only, hence identical
// output on every platform. The algorithm is documented in the README.
class CounterRng {
public:
    CounterRng(std::uint64_t seed, std::uint64_t stream)
        : key_(mix(mix(seed + 0x632BE59BD9B4E019ull) ^ stream)) {}

    /// Stateless draw: uniform in [0,1) for a given counter.
    [[nodiscard]] double uniform_at(std::uint64_t counter) const {
        // 53 high bits -> double in [0,1)
        return static_cast<double>(mix(key_ ^ counter) >> 11) * 0x1.0p-53;
    }

    [[nodiscard]] std::uint64_t bits_at(std::uint64_t counter) const {
        return mix(key_ ^ counter);
    }

    /// Sequential convenience: advances an internal counter.
    double uniform() { return uniform_at(next_++); }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Uniform integer in [0, n); n must be > 0. Uses 64-bit rejection-free
    /// multiply-shift which is exact enough for sampling indices.
    std::uint64_t below(std::uint64_t n) {
        // 128-bit multiply keeps the mapping unbiased for the index ranges
        // used here (n << 2^64).
        unsigned __int128 wide = static_cast<unsigned __int128>(bits_at(next_++)) * n;
        return static_cast<std::uint64_t>(wide >> 64);
    }

    /// Standard normal via Box-Muller on two counter draws.
    double normal() {
        double u1 = uniform();
        double u2 = uniform();
        if (u1 <= 0.0)
            u1 = 0x1.0p-53;
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925286766559 * u2);
    }

    [[nodiscard]] std::uint64_t counter() const { return next_; }

    static std::uint64_t mix(std::uint64_t z) {
        z += 0x9E3779B97F4A7C15ull;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

private:
    std::uint64_t key_;
    std::uint64_t next_ = 0;
};

/// Deterministically derive a child seed, e.g. one per (image, fraction) pair.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0) {
    return CounterRng::mix(CounterRng::mix(seed ^ CounterRng::mix(a)) ^ b);
}

/// First `take` entries of a seeded uniform shuffle of [0, n): distinct
/// indices, selection order preserved (partial Fisher-Yates).
inline std::vector<std::uint64_t> sample_without_replacement(std::uint64_t n, std::uint64_t take,
                                                             CounterRng& rng) {
    std::vector<std::uint64_t> pool(n);
    for (std::uint64_t i = 0; i < n; ++i)
        pool[i] = i;
    if (take > n)
        take = n;
    std::vector<std::uint64_t> out(take);
    for (std::uint64_t i = 0; i < take; ++i) {
        std::uint64_t j = i + rng.below(n - i);
        std::swap(pool[i], pool[j]);
        out[i] = pool[i];
    }
    return out;
}

} // namespace spectracast
