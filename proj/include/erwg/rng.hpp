#pragma once

// Splittable 64-bit PRNG for reproducible parallel Monte Carlo.
//
// The engine is splitmix64: a counter advanced by the golden-ratio increment
// and finalized by an avalanching mix. Replica streams are derived by hashing
// (master_seed, replica_index) through the same mixer, so replica r's stream
// depends only on (master, r) and never on scheduling or worker count.
//
// All distribution helpers are implemented here rather than via <random>
// because std::uniform_int_distribution and friends are not reproducible
// across standard-library implementations.

#include <cmath>
#include <cstdint>

namespace erwg {

inline std::uint64_t splitmix64_mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

class Rng {
  public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    // Stream for replica r of a run keyed by master: both words pass through
    // the mixer so that nearby (master, r) pairs give unrelated streams.
    static Rng for_replica(std::uint64_t master, std::uint64_t replica) {
        std::uint64_t a = splitmix64_mix(master + 0x9E3779B97F4A7C15ULL);
        std::uint64_t b = splitmix64_mix(replica + 0xD1B54A32D192ED03ULL);
        return Rng(splitmix64_mix(a ^ (b + 0x2545F4914F6CDD1DULL)));
    }

    std::uint64_t next_u64() {
        state_ += 0x9E3779B97F4A7C15ULL;
        return splitmix64_mix(state_);
    }

    // Uniform on [0,1) with 53 random bits; never returns 1.
    double next_u01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // Uniform on {0,...,bound-1}, unbiased via rejection. bound >= 1.
    std::uint64_t next_below(std::uint64_t bound) {
        const std::uint64_t limit = bound * ((~std::uint64_t{0}) / bound);
        std::uint64_t x;
        do {
            x = next_u64();
        } while (x >= limit);
        return x % bound;
    }

    // +1 with probability prob, else -1.
    int next_rademacher(double prob) { return next_u01() < prob ? +1 : -1; }

    // Standard normal via Box-Muller; caches the second variate.
    double next_normal() {
        if (have_cached_) {
            have_cached_ = false;
            return cached_;
        }
        double u1, u2;
        do {
            u1 = next_u01();
        } while (u1 <= 0.0);
        u2 = next_u01();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 6.283185307179586476925286766559 * u2;
        cached_ = r * std::sin(a);
        have_cached_ = true;
        return r * std::cos(a);
    }

  private:
    std::uint64_t state_;
    double cached_ = 0.0;
    bool have_cached_ = false;
};

} // namespace erwg
