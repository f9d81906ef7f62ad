#pragma once

#include "stocksent/matrix.hpp"
#include "stocksent/rng.hpp"

namespace stocksent {

// Values captured by one recurrent step, sufficient to replay the step
// exactly during backpropagation.
struct GruCache {
    Matrix x;        // input_dim x 1
    Matrix h_prev;   // hidden_dim x 1
    Matrix r, u, h_tilde;
};

struct GruGrads {
    Matrix dW_r, dW_u, dW_h;
    Matrix db_r, db_u, db_h;

    GruGrads() = default;
    GruGrads(int input_dim, int hidden_dim);
    void zero();
};

// Gated recurrent unit over the concatenated vector [h_prev, x]:
//   r = sigmoid(W_r [h_prev, x] + b_r)
//   u = sigmoid(W_u [h_prev, x] + b_u)
//   h~ = tanh(W_h [r * h_prev, x] + b_h)
//   h = (1 - u) * h_prev + u * h~
class GruCell {
  public:
    GruCell(int input_dim, int hidden_dim, SeededRng& rng);

    int input_dim() const { return input_dim_; }
    int hidden_dim() const { return hidden_dim_; }

    // One timestep. x is input_dim x 1, h_prev is hidden_dim x 1.
    Matrix step(const Matrix& x, const Matrix& h_prev, GruCache* cache = nullptr) const;

    // Reverse-time step: dh is dL/dh for this step's output. Accumulates
    // parameter gradients into grads and returns dL/dh_prev; writes dL/dx
    // into dx when given.
    Matrix backward(const Matrix& dh, const GruCache& cache, GruGrads& grads,
                    Matrix* dx = nullptr) const;

    Matrix W_r, W_u, W_h;   // hidden_dim x (hidden_dim + input_dim)
    Matrix b_r, b_u, b_h;   // hidden_dim x 1

  private:
    int input_dim_ = 0;
    int hidden_dim_ = 0;
};

struct LstmCache {
    Matrix x, h_prev, c_prev;
    Matrix f, i, o, g;   // gate activations
    Matrix c, tanh_c;
};

struct LstmGrads {
    Matrix dW_f, dW_i, dW_o, dW_g;
    Matrix db_f, db_i, db_o, db_g;

    LstmGrads() = default;
    LstmGrads(int input_dim, int hidden_dim);
    void zero();
};

struct LstmState {
    Matrix h, c;
};

// Standard LSTM over [h_prev, x] with a cell state:
//   f = sigmoid(W_f z + b_f), i = sigmoid(W_i z + b_i)
//   o = sigmoid(W_o z + b_o), g = tanh(W_g z + b_g)
//   c = f * c_prev + i * g,   h = o * tanh(c)
// The forget-gate bias is initialized to +1 so early training keeps memory.
class LstmCell {
  public:
    LstmCell(int input_dim, int hidden_dim, SeededRng& rng);

    int input_dim() const { return input_dim_; }
    int hidden_dim() const { return hidden_dim_; }

    LstmState step(const Matrix& x, const LstmState& prev, LstmCache* cache = nullptr) const;

    // dh/dc are dL/dh and dL/dc for this step's outputs; returns the
    // gradients for the previous state and optionally dL/dx.
    LstmState backward(const Matrix& dh, const Matrix& dc, const LstmCache& cache,
                       LstmGrads& grads, Matrix* dx = nullptr) const;

    Matrix W_f, W_i, W_o, W_g;   // hidden_dim x (hidden_dim + input_dim)
    Matrix b_f, b_i, b_o, b_g;   // hidden_dim x 1

  private:
    int input_dim_ = 0;
    int hidden_dim_ = 0;
};

}  // namespace stocksent
