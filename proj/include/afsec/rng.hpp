// Seedable Gaussian sampling on top of std::mt19937_64.
//
// Only the engine's raw 64-bit output is consumed. Uniforms are mapped as
// ((x >> 11) + 1) * 2^-53 into (0, 1] and normals come from Box-Muller, so
// the stream never depends on a library distribution implementation and a
// seed reproduces the same draws on every build.
#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>

namespace afsec {

class GaussianSampler {
public:
    explicit GaussianSampler(std::uint64_t seed) : engine_(seed) {}

    // uniform in (0, 1]
    double uniform01() {
        return static_cast<double>((engine_() >> 11) + 1) * 0x1.0p-53;
    }

    // N(0, 1)
    double standard_normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        const double r = std::sqrt(-2.0 * std::log(uniform01()));
        const double phi = kTwoPi * uniform01();
        spare_ = r * std::sin(phi);
        have_spare_ = true;
        return r * std::cos(phi);
    }

    // circularly-symmetric CN(0, variance): Re and Im each N(0, variance/2)
    std::complex<double> complex_normal(double variance = 1.0) {
        const double r = std::sqrt(-2.0 * std::log(uniform01()));
        const double phi = kTwoPi * uniform01();
        const double s = std::sqrt(0.5 * variance);
        return {s * r * std::cos(phi), s * r * std::sin(phi)};
    }

private:
    static constexpr double kTwoPi = 6.283185307179586476925286766559;

    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

}  // namespace afsec
