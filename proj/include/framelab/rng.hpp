#pragma once

#include <cmath>
#include <complex>
#include <cstdint>

namespace framelab {

/// splitmix64: counter-based 64-bit generator (Steele, Lea & Flood 2014).
/// The state advances by a fixed odd increment and the output is a bijective
/// hash of the counter, so identical seeds give identical streams on any
/// platform. All randomness in framelab flows through this generator.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    /// Uniform double in (0, 1].
    double next_unit() {
        return static_cast<double>((next() >> 11) + 1) * 0x1.0p-53;
    }

private:
    std::uint64_t state_;
};

/// Deterministically derive a sub-stream seed from (seed, salt...).
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt) {
    SplitMix64 g(seed ^ (0xD1B54A32D192ED03ULL * (salt + 1)));
    return g.next();
}

/// Standard normal variates via Box-Muller over splitmix64 uniforms.
class GaussianSampler {
public:
    explicit GaussianSampler(std::uint64_t seed) : rng_(seed) {}

    double next() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        const double u1 = rng_.next_unit();
        const double u2 = rng_.next_unit();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double theta = 2.0 * M_PI * u2;
        spare_ = r * std::sin(theta);
        has_spare_ = true;
        return r * std::cos(theta);
    }

    /// Complex normal with independent N(0,1) real and imaginary parts.
    std::complex<double> next_complex() {
        const double re = next();
        const double im = next();
        return {re, im};
    }

private:
    SplitMix64 rng_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

} // namespace framelab
