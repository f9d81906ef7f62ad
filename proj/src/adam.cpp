#include "stocksent/adam.hpp"

#include <cmath>

#include "stocksent/errors.hpp"

namespace stocksent {

AdamState AdamState::for_params(const std::vector<Matrix*>& params) {
    AdamState s;
    s.m.reserve(params.size());
    s.v.reserve(params.size());
    for (const Matrix* p : params) {
        s.m.emplace_back(p->rows, p->cols, 0.0);
        s.v.emplace_back(p->rows, p->cols, 0.0);
    }
    return s;
}

void adam_step(const std::vector<Matrix*>& params, const std::vector<const Matrix*>& grads,
               AdamState& state, double lr) {
    if (params.size() != grads.size() || params.size() != state.m.size()) {
        throw ShapeError("adam_step: parameter, gradient, and state counts differ");
    }
    state.t += 1;
    const double bc1 = 1.0 - std::pow(state.beta1, static_cast<double>(state.t));
    const double bc2 = 1.0 - std::pow(state.beta2, static_cast<double>(state.t));
    for (std::size_t i = 0; i < params.size(); ++i) {
        Matrix& p = *params[i];
        const Matrix& g = *grads[i];
        Matrix& m = state.m[i];
        Matrix& v = state.v[i];
        if (!p.same_shape(g) || !p.same_shape(m)) {
            throw ShapeError("adam_step: shape mismatch at parameter " + std::to_string(i) +
                             ": param " + p.shape_str() + ", grad " + g.shape_str());
        }
        require_finite(g, "adam_step gradient");
        for (std::size_t j = 0; j < p.size(); ++j) {
            const double gj = g.data[j];
            m.data[j] = state.beta1 * m.data[j] + (1.0 - state.beta1) * gj;
            v.data[j] = state.beta2 * v.data[j] + (1.0 - state.beta2) * gj * gj;
            const double mhat = m.data[j] / bc1;
            const double vhat = v.data[j] / bc2;
            p.data[j] -= lr * mhat / (std::sqrt(vhat) + state.epsilon);
        }
    }
}

}  // namespace stocksent
