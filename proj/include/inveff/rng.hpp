#pragma once

// Seeded randomness with an explicit splitting rule.
//
// Every random quantity in the library is driven by a 64-bit seed. Substreams
// are derived with split_seed(master, lane): lane 0/1 inside a dataset are the
// design and noise streams; the Monte Carlo harness derives one stream per
// sample size and one per replication. The derivation is a SplitMix64
// finalizer, so distinct lanes give statistically independent streams and the
// whole tree is reproducible from the master seed alone.

#include <cmath>
#include <cstdint>
#include <random>

namespace inveff {

inline std::uint64_t split_seed(std::uint64_t master, std::uint64_t lane) {
    std::uint64_t z = master + (lane + 1) * 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

// mt19937_64 with explicit double conversions, so a seed pins the exact
// sample path irrespective of standard-library distribution internals.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    // uniform on [0, 1)
    double uniform01() { return (engine_() >> 11) * 0x1.0p-53; }

    // uniform on (0, 1), never exactly 0 or 1; safe under log and logit
    double uniform_open01() { return ((engine_() >> 12) + 0.5) * 0x1.0p-52; }

    // standard normal via Box-Muller; consumes exactly two engine draws
    double normal() {
        double u1 = uniform_open01();
        double u2 = uniform01();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(two_pi * u2);
    }

private:
    static constexpr double two_pi = 6.283185307179586476925287;
    std::mt19937_64 engine_;
};

// Lanes used by generate_dataset when splitting a dataset seed.
inline constexpr std::uint64_t kDesignLane = 0;
inline constexpr std::uint64_t kNoiseLane = 1;

} // namespace inveff
