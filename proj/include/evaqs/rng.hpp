// rng.hpp
// Seeded random number generation with explicit sub-stream derivation.
// Every random draw in the library flows through Rng so that a run is a pure
// function of (parameters, seed).

#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <random>

namespace evaqs {

// One splitmix64 step. Used for seed mixing, not as the main generator.
inline std::uint64_t splitmix64(std::uint64_t& state) {
    state += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Seeded generator (mt19937_64 core) with derived child streams.
///
/// Sub-stream scheme: child(tag) seeds a fresh generator with
/// splitmix64(seed ^ splitmix64(tag)), so child streams are pure functions of
/// (parent seed, tag) and never depend on how much the parent has been used.
/// Nested tags (study, qubits, infidelity index, circuit index) give the
/// per-cell streams of the experiment harness.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : seed_(seed), engine_(seed) {}

    std::uint64_t seed() const { return seed_; }

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform double in [0, 1), 53-bit resolution.
    double uniform() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    bool bernoulli(double p) { return uniform() < p; }

    /// Uniform integer in [0, bound); rejection sampling, no modulo bias.
    std::uint64_t uniform_index(std::uint64_t bound) {
        const std::uint64_t threshold = (0 - bound) % bound;
        for (;;) {
            const std::uint64_t r = next_u64();
            if (r >= threshold) return r % bound;
        }
    }

    /// Uniform n-bit mask (n <= 64).
    std::uint64_t uniform_bits(int n_bits) {
        if (n_bits == 0) return 0;
        return next_u64() >> (64 - n_bits);
    }

    /// Standard normal via Box-Muller; second value of each pair is cached.
    double gaussian() {
        if (have_cached_) {
            have_cached_ = false;
            return cached_;
        }
        const double u1 = 1.0 - uniform();  // (0, 1], keeps log finite
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double angle = 2.0 * std::numbers::pi * u2;
        cached_ = r * std::sin(angle);
        have_cached_ = true;
        return r * std::cos(angle);
    }

    /// Standard complex Gaussian: independent real/imaginary parts of
    /// variance 1/2 each, so E|z|^2 = 1.
    std::complex<double> complex_gaussian() {
        const double s = std::numbers::sqrt2 / 2.0;
        return {s * gaussian(), s * gaussian()};
    }

    Rng child(std::uint64_t tag) const {
        std::uint64_t t = tag;
        const std::uint64_t mixed = splitmix64(t);
        std::uint64_t s = seed_ ^ mixed;
        return Rng(splitmix64(s));
    }

private:
    std::uint64_t seed_;
    std::mt19937_64 engine_;
    double cached_ = 0.0;
    bool have_cached_ = false;
};

}  // namespace evaqs
