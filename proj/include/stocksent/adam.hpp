#pragma once

#include <vector>

#include "stocksent/matrix.hpp"

namespace stocksent {

// Adam moment accumulators for one parameter set. m and v mirror the
// parameter shapes; t counts completed steps.
struct AdamState {
    std::vector<Matrix> m;
    std::vector<Matrix> v;
    long t = 0;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;

    static AdamState for_params(const std::vector<Matrix*>& params);
};

// One bias-corrected Adam update over every parameter:
//   t <- t + 1
//   m <- beta1 m + (1 - beta1) g
//   v <- beta2 v + (1 - beta2) g^2
//   p <- p - lr * (m / (1 - beta1^t)) / (sqrt(v / (1 - beta2^t)) + epsilon)
// lr = 0 leaves parameters untouched (moments still advance).
void adam_step(const std::vector<Matrix*>& params, const std::vector<const Matrix*>& grads,
               AdamState& state, double lr);

}  // namespace stocksent
