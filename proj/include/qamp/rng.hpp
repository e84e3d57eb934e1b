#pragma once

#include <cstdint>
#include <random>

namespace qamp {

// Seeded RNG stream. Identical (seed, stream) pairs yield identical draw
// sequences; distinct streams are decorrelated by splitmix64 mixing.
class RngStream {
public:
    explicit RngStream(std::uint64_t seed, std::uint64_t stream = 0)
        : gen_(mix(seed ^ mix(stream + 0x9e3779b97f4a7c15ULL))) {}

    double uniform() { return std::uniform_real_distribution<double>(0.0, 1.0)(gen_); }

    double uniform(double lo, double hi) {
        return std::uniform_real_distribution<double>(lo, hi)(gen_);
    }

    // Unbiased integer in [0, n).
    std::uint64_t below(std::uint64_t n) {
        return std::uniform_int_distribution<std::uint64_t>(0, n - 1)(gen_);
    }

    bool bernoulli(double p) {
        if (p <= 0.0) return false;
        if (p >= 1.0) return true;
        return uniform() < p;
    }

    std::mt19937_64& engine() { return gen_; }

private:
    static std::uint64_t mix(std::uint64_t z) {
        z += 0x9e3779b97f4a7c15ULL;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    std::mt19937_64 gen_;
};

} // namespace qamp
