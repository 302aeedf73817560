#ifndef FREEOBS_LAMBERT_HPP
#define FREEOBS_LAMBERT_HPP

#include <cmath>

#include "freeobs/errors.hpp"

namespace freeobs {

// Principal branch of the Lambert W function, W(x) e^{W(x)} = x, for
// x >= -1/e. Halley iteration to absolute tolerance 1e-12.
inline double lambert_w(double x) {
    constexpr double inv_e = 0.36787944117144233;  // 1/e
    if (x < -inv_e) throw DomainError("lambert_w: x must be >= -1/e");
    if (x == 0.0) return 0.0;

    double w;
    if (x < -inv_e + 1e-6) {
        // Series around the branch point -1/e; the sqrt argument can dip a
        // few ulps below zero right at the branch point.
        double z = std::max(0.0, 2.0 * (M_E * x + 1.0));
        double p = std::sqrt(z);
        w = -1.0 + p - p * p / 3.0 + 11.0 * p * p * p / 72.0;
    } else if (x < 1.0) {
        // Low-order series, refined below.
        w = x * (1.0 - x + 1.5 * x * x);
        if (w <= -1.0) w = -0.99;
    } else {
        double l1 = std::log(x);
        double l2 = std::log(l1 > 1.0 ? l1 : 1.0);
        w = l1 - l2;
    }

    for (int it = 0; it < 100; ++it) {
        double ew = std::exp(w);
        double f = w * ew - x;
        double denom = ew * (w + 1.0) - (w + 2.0) * f / (2.0 * w + 2.0);
        double dw = f / denom;
        if (!std::isfinite(dw)) break;  // at the branch point w = -1 exactly
        w -= dw;
        if (std::abs(dw) < 1e-12) break;
    }
    return w;
}

// Lower bound on the secondary branch: W_{-1}(-e^{-u-1}) >= -1 - sqrt(2u) - u.
inline double lambert_w_minus1_lb(double u) {
    if (!(u > 0.0)) throw DomainError("lambert_w_minus1_lb: u must be positive");
    return -1.0 - std::sqrt(2.0 * u) - u;
}

}  // namespace freeobs

#endif
