#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace gwabm {

/// splitmix64 mix step. Used to derive well-separated stream seeds from one
/// master seed; also usable as a tiny standalone generator.
inline std::uint64_t splitmix64_next(std::uint64_t& state) {
    state += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Deterministic seed for a named substream of a master seed. Streams are
/// fixed at init, so adding draws to one subsystem cannot perturb another.
inline std::uint64_t substream_seed(std::uint64_t master, std::uint64_t stream_id) {
    std::uint64_t s = master ^ (stream_id * 0x6a09e667f3bcc909ULL + 0x1234567);
    std::uint64_t a = splitmix64_next(s);
    return a ^ splitmix64_next(s);
}

/// Seeded generator with hand-rolled transforms. The engine (mt19937_64) is
/// bit-exact by the standard; the transforms below avoid std::*_distribution,
/// whose output differs between standard libraries. Every simulation draw
/// goes through this class so that runs are reproducible byte for byte.
class Rng {
public:
    explicit Rng(std::uint64_t seed = 0) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform in [0,1) with 53 random mantissa bits.
    double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    bool bernoulli(double p) { return uniform01() < p; }

    /// Uniform integer in [0, n). Lemire multiply-shift; the tiny modulo bias
    /// is irrelevant at simulation scale and keeps the draw count fixed.
    std::uint64_t uniform_below(std::uint64_t n) {
        return static_cast<std::uint64_t>(
            (static_cast<unsigned __int128>(next_u64()) * n) >> 64);
    }

    /// Uniform integer in [lo, hi], inclusive.
    std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) {
        return lo + static_cast<std::int64_t>(
                        uniform_below(static_cast<std::uint64_t>(hi - lo + 1)));
    }

    double uniform(double a, double b) { return a + uniform01() * (b - a); }

    /// Standard normal via Box-Muller. Consumes exactly two draws.
    double normal01() {
        double u1 = uniform01();
        double u2 = uniform01();
        if (u1 < 1e-300) u1 = 1e-300;
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
    }

    /// Lognormal parameterized by its arithmetic mean and log-space sigma:
    /// mu = ln(mean) - sigma^2/2, so E[X] = mean exactly.
    double lognormal_mean(double mean, double sigma) {
        double mu = std::log(mean) - 0.5 * sigma * sigma;
        return std::exp(mu + sigma * normal01());
    }

private:
    std::mt19937_64 engine_;
};

} // namespace gwabm
