#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace hoi {

/// splitmix64 step; used to derive independent per-replicate seeds.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

/// Deterministic RNG wrapper. All distribution transforms are written out
/// explicitly so a (seed, call sequence) pair yields the same stream on
/// every platform; std::*_distribution is implementation-defined and
/// deliberately avoided.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    std::uint64_t next_u64() { return eng_(); }

    /// Uniform in [0, 1) with 53 random bits.
    double uniform01() {
        return static_cast<double>(eng_() >> 11) * 0x1.0p-53;
    }

    /// Uniform integer in [0, n) via Lemire multiply-shift reduction.
    std::uint64_t uniform_below(std::uint64_t n) {
        const auto x = eng_();
        return static_cast<std::uint64_t>(
            (static_cast<unsigned __int128>(x) * n) >> 64);
    }

    bool bernoulli(double p) { return uniform01() < p; }

    /// Standard normal via Box-Muller (pairs cached).
    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = uniform01();
        while (u1 <= 0.0) u1 = uniform01();
        const double u2 = uniform01();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 6.283185307179586476925286766559 * u2;
        spare_ = r * std::sin(a);
        have_spare_ = true;
        return r * std::cos(a);
    }

    /// Exponential(1), for Dirichlet sampling.
    double exponential() {
        double u = uniform01();
        while (u <= 0.0) u = uniform01();
        return -std::log(u);
    }

private:
    std::mt19937_64 eng_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

}  // namespace hoi
