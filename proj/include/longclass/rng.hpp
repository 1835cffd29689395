#pragma once

#include <cstdint>
#include <cmath>

namespace longclass {

/// Splittable 64-bit generator (xoshiro256++ seeded through splitmix64).
///
/// The generator is fully specified here so that any seed produces a
/// bit-identical stream on every platform; standard-library distributions
/// are avoided for the same reason. Streams for replicates are derived as
/// seed_base + replicate_index (see derive_seed for substreams).
class Rng64 {
public:
    explicit Rng64(std::uint64_t seed) {
        // splitmix64 expansion of the seed into the xoshiro state
        std::uint64_t x = seed;
        for (auto& w : state_) w = splitmix64(x);
        has_spare_ = false;
        spare_ = 0.0;
    }

    std::uint64_t next_u64() {
        const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    /// Uniform double in [0, 1) with 53 random bits.
    double next_u01() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    /// Uniform integer in [0, n).
    std::uint64_t next_below(std::uint64_t n) {
        // rejection to kill modulo bias
        const std::uint64_t threshold = (0 - n) % n;
        for (;;) {
            const std::uint64_t r = next_u64();
            if (r >= threshold) return r % n;
        }
    }

    /// Standard normal via Box-Muller (deterministic, pair-cached).
    double next_gaussian() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u1 = next_u01();
        while (u1 <= 0.0) u1 = next_u01();
        const double u2 = next_u01();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double theta = 6.283185307179586476925286766559 * u2;
        spare_ = r * std::sin(theta);
        has_spare_ = true;
        return r * std::cos(theta);
    }

    static std::uint64_t splitmix64(std::uint64_t& x) {
        std::uint64_t z = (x += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

private:
    static std::uint64_t rotl(std::uint64_t v, int k) {
        return (v << k) | (v >> (64 - k));
    }

    std::uint64_t state_[4];
    bool has_spare_;
    double spare_;
};

/// Mixes a base seed with stream tags into an independent substream seed.
/// Used to give trimming, CV-fold shuffling etc. their own streams so that
/// consuming randomness in one stage never shifts another stage's draws.
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t tag_a, std::uint64_t tag_b = 0) {
    std::uint64_t x = base;
    std::uint64_t h = Rng64::splitmix64(x);
    x = h ^ (tag_a + 0x9e3779b97f4a7c15ULL);
    h = Rng64::splitmix64(x);
    x = h ^ (tag_b + 0x9e3779b97f4a7c15ULL);
    return Rng64::splitmix64(x);
}

} // namespace longclass
