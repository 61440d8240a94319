#pragma once

#include <cstdint>
#include <random>

namespace akbeam {

/// Standard normal CDF, Phi(x) = erfc(-x/sqrt(2))/2.
double norm_cdf(double x);

/// Standard normal quantile (inverse CDF) via Wichura's algorithm AS 241
/// (PPND16), absolute error below 1e-15 on (0,1). Outside (0,1) returns
/// +/-infinity at the endpoints and NaN otherwise.
double norm_ppf(double p);

/// SplitMix64 mixing step; used to derive independent sub-stream seeds.
std::uint64_t splitmix64(std::uint64_t& state);

/// Deterministic RNG wrapper around std::mt19937_64.
///
/// All floating-point draws are derived from raw 64-bit words with fixed
/// arithmetic (no std::*_distribution), so identical seeds give identical
/// streams on every platform.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    /// Derive a deterministic child seed from (seed, id...) tags.
    static std::uint64_t derive(std::uint64_t seed, std::uint64_t a,
                                std::uint64_t b = 0, std::uint64_t c = 0);

    /// Uniform draw in [0, 1) with 53-bit resolution.
    double uniform() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    /// Uniform draw in [a, b).
    double uniform(double a, double b) { return a + (b - a) * uniform(); }

    /// Standard normal draw by inversion; uniform is nudged into (0,1).
    double normal() {
        double u = uniform();
        if (u <= 0.0) u = 0x1.0p-53;
        return norm_ppf(u);
    }

    /// Uniform integer in [0, n), rejection-free modulo bias below 2^-53.
    std::uint64_t uniform_index(std::uint64_t n) {
        return static_cast<std::uint64_t>(uniform() * static_cast<double>(n));
    }

    std::mt19937_64& engine() { return engine_; }

private:
    std::mt19937_64 engine_;
};

}  // namespace akbeam
