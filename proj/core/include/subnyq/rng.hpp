#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>

namespace subnyq {

/// SplitMix64 finalizer. Used to derive independent child seeds from a master
/// seed so that parallel streams (per trial, per tensor) never share state.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t salt) {
    std::uint64_t z = master + 0x9E3779B97F4A7C15ULL * (salt + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

/// Seeded random stream on top of std::mt19937_64. Uniform and normal draws
/// are converted from raw 64-bit words here instead of going through
/// std::uniform_real_distribution, whose output is not pinned by the standard;
/// this keeps position draws and noise realizations reproducible across
/// standard libraries.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    std::uint64_t next_u64() { return gen_(); }

    /// Uniform in [0, 1), 53-bit resolution.
    double uniform01() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    /// Index uniform in [0, n).
    int uniform_index(int n) { return static_cast<int>(uniform01() * n); }

    /// Standard normal via Box-Muller; deterministic for a given stream.
    double normal() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        // u1 in (0, 1] so the log is finite.
        const double u1 = (static_cast<double>(gen_() >> 11) + 1.0) * 0x1.0p-53;
        const double u2 = uniform01();
        const double radius = std::sqrt(-2.0 * std::log(u1));
        const double angle = 2.0 * 3.14159265358979323846 * u2;
        spare_ = radius * std::sin(angle);
        has_spare_ = true;
        return radius * std::cos(angle);
    }

    /// Circularly symmetric complex normal with unit total variance.
    std::complex<double> complex_normal() {
        const double re = normal();
        const double im = normal();
        return {re * 0x1.6a09e667f3bcdp-1, im * 0x1.6a09e667f3bcdp-1};  // 1/sqrt(2)
    }

private:
    std::mt19937_64 gen_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace subnyq
