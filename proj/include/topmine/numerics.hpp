#pragma once

#include <cmath>

namespace topmine {

// Digamma via upward recurrence into the asymptotic regime (x >= 10), then
// the standard Bernoulli-number series. Accurate to ~1e-13 for x > 0.
inline double digamma(double x) {
    double acc = 0.0;
    while (x < 10.0) {
        acc -= 1.0 / x;
        x += 1.0;
    }
    double inv = 1.0 / x;
    double inv2 = inv * inv;
    double series = inv2 * (1.0 / 12.0 - inv2 * (1.0 / 120.0 - inv2 * (1.0 / 252.0 - inv2 * (1.0 / 240.0 - inv2 * (1.0 / 132.0)))));
    return acc + std::log(x) - 0.5 * inv - series;
}

}  // namespace topmine
