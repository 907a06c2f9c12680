#pragma once

#include <cmath>
#include <cstdint>
#include <random>

#include "ratsys/core.hpp"

// shared sampling utilities for the property-style tests

namespace testutil {

struct Rng {
    std::mt19937_64 eng;

    explicit Rng(std::uint64_t seed) : eng(seed) {}

    double uniform(double lo, double hi) {
        const double u = static_cast<double>(eng() >> 11) * 0x1.0p-53;
        return lo + (hi - lo) * u;
    }

    ratsys::Point point(double lo, double hi) {
        return ratsys::Point{uniform(lo, hi), uniform(lo, hi)};
    }

    // random validated Params; beta2 forced to zero when asked
    ratsys::Params params(bool beta2_zero, double bound = 2.5) {
        for (;;) {
            const double a1 = uniform(-bound, bound);
            const double b1 = uniform(-bound, bound);
            const double a2 = uniform(-bound, bound);
            const double b2 = beta2_zero ? 0.0 : uniform(-bound, bound);
            const double det = a1 * b2 - a2 * b1;
            if (std::abs(det) <= 1e-9) continue;
            return ratsys::validate_params(a1, b1, a2, b2);
        }
    }
};

inline double rel_diff(double a, double b) {
    return std::abs(a - b) / std::max({1.0, std::abs(a), std::abs(b)});
}

inline double rel_to(double a, double b, double floor_scale = 1.0) {
    return std::abs(a - b) / std::max(floor_scale, std::abs(b));
}

}  // namespace testutil
