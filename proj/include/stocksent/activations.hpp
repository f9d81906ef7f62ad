#pragma once

#include <cmath>

namespace stocksent {

// Logistic sigmoid, saturation-safe: never returns NaN for finite input.
inline double sigmoid(double x) {
    if (x >= 0.0) {
        const double e = std::exp(-x);
        return 1.0 / (1.0 + e);
    }
    const double e = std::exp(x);
    return e / (1.0 + e);
}

// Derivatives take the activation VALUE, not the pre-activation. Both forms
// fall out of the function values, which the forward caches already hold.
inline double dsigmoid_from_value(double s) { return s * (1.0 - s); }

inline double tanh_act(double x) { return std::tanh(x); }

inline double dtanh_from_value(double t) { return 1.0 - t * t; }

}  // namespace stocksent
