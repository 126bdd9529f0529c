// random.hpp: Seeded random numbers with a platform-independent stream
//
// The raw engine is std::mt19937_64, whose output sequence is fixed by the
// C++ standard. The <random> distributions are not, so the conversions to
// uniform and normal deviates are written out here.

#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <random>

namespace timeless {

class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    // Uniform on [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // Box–Muller; one deviate per call, the partner is discarded.
    double normal() {
        double u1 = uniform();
        while (u1 <= 0.0) u1 = uniform();
        const double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
    }

    std::complex<double> complex_normal() { return {normal(), normal()}; }

    double phase() { return uniform(0.0, 2.0 * std::numbers::pi); }

private:
    std::mt19937_64 engine_;
};

}  // namespace timeless
