#pragma once

#include <cmath>
#include <cstdint>
#include <random>

#include "topomd/vec3.hpp"

namespace topomd {

/// Deterministic pseudo-random stream.
///
/// Wraps std::mt19937_64 but derives uniforms and Gaussians from the raw
/// 64-bit output directly (std::normal_distribution is implementation
/// defined, which would break cross-platform reproducibility of
/// trajectories). Identical (seed, stream) always yields the identical
/// sequence of values.
class Rng {
public:
    explicit Rng(std::uint64_t seed, std::uint64_t stream = 0)
        : engine_(mix(seed, stream)) {}

    /// Uniform in [0, 1) with 53 random bits.
    double uniform() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    /// Uniform in [lo, hi).
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Standard normal via Box-Muller; spare value cached.
    double gaussian() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u1 = uniform();
        while (u1 <= 0.0) u1 = uniform();
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 6.283185307179586476925286766559 * u2;
        spare_ = r * std::sin(a);
        has_spare_ = true;
        return r * std::cos(a);
    }

    Vec3 gaussian_vec3() {
        const double a = gaussian();
        const double b = gaussian();
        const double c = gaussian();
        return {a, b, c};
    }

    /// Uniformly distributed direction on the unit sphere.
    Vec3 unit_vector() {
        // Marsaglia rejection on the disk.
        for (;;) {
            const double a = 2.0 * uniform() - 1.0;
            const double b = 2.0 * uniform() - 1.0;
            const double s = a * a + b * b;
            if (s >= 1.0 || s == 0.0) continue;
            const double f = 2.0 * std::sqrt(1.0 - s);
            return {a * f, b * f, 1.0 - 2.0 * s};
        }
    }

    std::uint64_t raw() { return engine_(); }

private:
    static std::uint64_t mix(std::uint64_t seed, std::uint64_t stream) {
        // splitmix64 over (seed, stream) so distinct streams decorrelate.
        std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

} // namespace topomd
