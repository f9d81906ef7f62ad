#pragma once

#include "stocksent/matrix.hpp"
#include "stocksent/rng.hpp"

namespace stocksent {

// Glorot/Xavier uniform: entries drawn from +-sqrt(6 / (rows + cols)).
// Weight matrices use this; biases initialize to zero (callers construct
// zero matrices directly).
Matrix glorot_init(int rows, int cols, SeededRng& rng);

}  // namespace stocksent
