#include "stocksent/init.hpp"

#include <cmath>

namespace stocksent {

Matrix glorot_init(int rows, int cols, SeededRng& rng) {
    const double bound = std::sqrt(6.0 / (rows + cols));
    Matrix m(rows, cols, 0.0);
    for (double& v : m.data) v = rng.uniform(-bound, bound);
    return m;
}

}  // namespace stocksent
