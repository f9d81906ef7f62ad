#include "stocksent/cells.hpp"

#include <string>

#include "stocksent/activations.hpp"
#include "stocksent/errors.hpp"
#include "stocksent/init.hpp"

namespace stocksent {

namespace {

void check_column(const Matrix& m, int rows, const char* what) {
    if (m.rows != rows || m.cols != 1) {
        throw ShapeError(std::string(what) + " must be " + std::to_string(rows) + "x1, got " +
                         m.shape_str());
    }
}

// z = [top; bottom]
Matrix vstack(const Matrix& top, const Matrix& bottom) {
    Matrix z(top.rows + bottom.rows, 1);
    for (int i = 0; i < top.rows; ++i) z(i, 0) = top(i, 0);
    for (int i = 0; i < bottom.rows; ++i) z(top.rows + i, 0) = bottom(i, 0);
    return z;
}

// a = W z + b without temporaries; the training loop lives here.
Matrix affine(const Matrix& W, const Matrix& z, const Matrix& b) {
    Matrix out(W.rows, 1);
    for (int i = 0; i < W.rows; ++i) {
        double acc = b(i, 0);
        const double* wrow = &W.data[static_cast<std::size_t>(i) * W.cols];
        for (int k = 0; k < W.cols; ++k) acc += wrow[k] * z.data[k];
        out(i, 0) = acc;
    }
    return out;
}

// dW += da z^T, db += da
void accumulate(Matrix& dW, Matrix& db, const Matrix& da, const Matrix& z) {
    for (int i = 0; i < dW.rows; ++i) {
        double* row = &dW.data[static_cast<std::size_t>(i) * dW.cols];
        const double gi = da(i, 0);
        for (int k = 0; k < dW.cols; ++k) row[k] += gi * z.data[k];
        db(i, 0) += gi;
    }
}

// dz += W^T da, without materializing the transpose
void add_wt_times(Matrix& dz, const Matrix& W, const Matrix& da) {
    for (int i = 0; i < W.rows; ++i) {
        const double* wrow = &W.data[static_cast<std::size_t>(i) * W.cols];
        const double gi = da(i, 0);
        for (int k = 0; k < W.cols; ++k) dz.data[k] += gi * wrow[k];
    }
}

void split(const Matrix& z, Matrix* top, Matrix* bottom, int top_rows) {
    if (top) {
        for (int i = 0; i < top_rows; ++i) (*top)(i, 0) += z(i, 0);
    }
    if (bottom) {
        for (int i = top_rows; i < z.rows; ++i) (*bottom)(i - top_rows, 0) += z(i, 0);
    }
}

}  // namespace

GruGrads::GruGrads(int input_dim, int hidden_dim)
    : dW_r(hidden_dim, hidden_dim + input_dim),
      dW_u(hidden_dim, hidden_dim + input_dim),
      dW_h(hidden_dim, hidden_dim + input_dim),
      db_r(hidden_dim, 1),
      db_u(hidden_dim, 1),
      db_h(hidden_dim, 1) {}

void GruGrads::zero() {
    for (Matrix* m : {&dW_r, &dW_u, &dW_h, &db_r, &db_u, &db_h}) {
        std::fill(m->data.begin(), m->data.end(), 0.0);
    }
}

GruCell::GruCell(int input_dim, int hidden_dim, SeededRng& rng)
    : input_dim_(input_dim), hidden_dim_(hidden_dim) {
    if (input_dim < 1 || hidden_dim < 1) {
        throw ShapeError("cell dimensions must be positive, got input " +
                         std::to_string(input_dim) + " hidden " + std::to_string(hidden_dim));
    }
    const int z = hidden_dim + input_dim;
    W_r = glorot_init(hidden_dim, z, rng);
    W_u = glorot_init(hidden_dim, z, rng);
    W_h = glorot_init(hidden_dim, z, rng);
    b_r = Matrix(hidden_dim, 1);
    b_u = Matrix(hidden_dim, 1);
    b_h = Matrix(hidden_dim, 1);
}

Matrix GruCell::step(const Matrix& x, const Matrix& h_prev, GruCache* cache) const {
    check_column(x, input_dim_, "cell input");
    check_column(h_prev, hidden_dim_, "previous hidden state");

    const Matrix z = vstack(h_prev, x);
    Matrix r = affine(W_r, z, b_r);
    Matrix u = affine(W_u, z, b_u);
    for (double& v : r.data) v = sigmoid(v);
    for (double& v : u.data) v = sigmoid(v);

    Matrix rh(hidden_dim_, 1);
    for (int i = 0; i < hidden_dim_; ++i) rh(i, 0) = r(i, 0) * h_prev(i, 0);
    const Matrix zc = vstack(rh, x);
    Matrix h_tilde = affine(W_h, zc, b_h);
    for (double& v : h_tilde.data) v = tanh_act(v);

    Matrix h(hidden_dim_, 1);
    for (int i = 0; i < hidden_dim_; ++i) {
        h(i, 0) = (1.0 - u(i, 0)) * h_prev(i, 0) + u(i, 0) * h_tilde(i, 0);
    }
    require_finite(h, "gru_step output");

    if (cache) {
        cache->x = x;
        cache->h_prev = h_prev;
        cache->r = std::move(r);
        cache->u = std::move(u);
        cache->h_tilde = std::move(h_tilde);
    }
    return h;
}

Matrix GruCell::backward(const Matrix& dh, const GruCache& cache, GruGrads& grads,
                         Matrix* dx) const {
    check_column(dh, hidden_dim_, "upstream hidden gradient");
    if (cache.h_prev.rows != hidden_dim_ || cache.x.rows != input_dim_ ||
        cache.r.rows != hidden_dim_) {
        throw ShapeError("step cache does not match this cell (cache for input " +
                         cache.x.shape_str() + ", hidden " + cache.h_prev.shape_str() + ")");
    }
    if (grads.dW_r.rows != hidden_dim_ || grads.dW_r.cols != hidden_dim_ + input_dim_) {
        throw ShapeError("gradient buffers do not match this cell");
    }

    const Matrix& h_prev = cache.h_prev;
    const Matrix& r = cache.r;
    const Matrix& u = cache.u;
    const Matrix& ht = cache.h_tilde;

    Matrix da_u(hidden_dim_, 1), da_h(hidden_dim_, 1);
    Matrix dh_prev(hidden_dim_, 1);
    for (int i = 0; i < hidden_dim_; ++i) {
        const double g = dh(i, 0);
        da_u(i, 0) = g * (ht(i, 0) - h_prev(i, 0)) * dsigmoid_from_value(u(i, 0));
        da_h(i, 0) = g * u(i, 0) * dtanh_from_value(ht(i, 0));
        dh_prev(i, 0) = g * (1.0 - u(i, 0));
    }

    // candidate path: zc = [r * h_prev, x]
    Matrix rh(hidden_dim_, 1);
    for (int i = 0; i < hidden_dim_; ++i) rh(i, 0) = r(i, 0) * h_prev(i, 0);
    const Matrix zc = vstack(rh, cache.x);
    accumulate(grads.dW_h, grads.db_h, da_h, zc);

    Matrix dzc(hidden_dim_ + input_dim_, 1);
    add_wt_times(dzc, W_h, da_h);
    Matrix drh(hidden_dim_, 1);
    split(dzc, &drh, dx, hidden_dim_);

    Matrix da_r(hidden_dim_, 1);
    for (int i = 0; i < hidden_dim_; ++i) {
        dh_prev(i, 0) += drh(i, 0) * r(i, 0);
        da_r(i, 0) = drh(i, 0) * h_prev(i, 0) * dsigmoid_from_value(r(i, 0));
    }

    const Matrix z = vstack(h_prev, cache.x);
    accumulate(grads.dW_r, grads.db_r, da_r, z);
    accumulate(grads.dW_u, grads.db_u, da_u, z);

    Matrix dz(hidden_dim_ + input_dim_, 1);
    add_wt_times(dz, W_r, da_r);
    add_wt_times(dz, W_u, da_u);
    split(dz, &dh_prev, dx, hidden_dim_);
    return dh_prev;
}

LstmGrads::LstmGrads(int input_dim, int hidden_dim)
    : dW_f(hidden_dim, hidden_dim + input_dim),
      dW_i(hidden_dim, hidden_dim + input_dim),
      dW_o(hidden_dim, hidden_dim + input_dim),
      dW_g(hidden_dim, hidden_dim + input_dim),
      db_f(hidden_dim, 1),
      db_i(hidden_dim, 1),
      db_o(hidden_dim, 1),
      db_g(hidden_dim, 1) {}

void LstmGrads::zero() {
    for (Matrix* m : {&dW_f, &dW_i, &dW_o, &dW_g, &db_f, &db_i, &db_o, &db_g}) {
        std::fill(m->data.begin(), m->data.end(), 0.0);
    }
}

LstmCell::LstmCell(int input_dim, int hidden_dim, SeededRng& rng)
    : input_dim_(input_dim), hidden_dim_(hidden_dim) {
    if (input_dim < 1 || hidden_dim < 1) {
        throw ShapeError("cell dimensions must be positive, got input " +
                         std::to_string(input_dim) + " hidden " + std::to_string(hidden_dim));
    }
    const int z = hidden_dim + input_dim;
    W_f = glorot_init(hidden_dim, z, rng);
    W_i = glorot_init(hidden_dim, z, rng);
    W_o = glorot_init(hidden_dim, z, rng);
    W_g = glorot_init(hidden_dim, z, rng);
    b_f = Matrix(hidden_dim, 1, 1.0);   // keep memory open early in training
    b_i = Matrix(hidden_dim, 1);
    b_o = Matrix(hidden_dim, 1);
    b_g = Matrix(hidden_dim, 1);
}

LstmState LstmCell::step(const Matrix& x, const LstmState& prev, LstmCache* cache) const {
    check_column(x, input_dim_, "cell input");
    check_column(prev.h, hidden_dim_, "previous hidden state");
    check_column(prev.c, hidden_dim_, "previous cell state");

    const Matrix z = vstack(prev.h, x);
    Matrix f = affine(W_f, z, b_f);
    Matrix i = affine(W_i, z, b_i);
    Matrix o = affine(W_o, z, b_o);
    Matrix g = affine(W_g, z, b_g);
    for (double& v : f.data) v = sigmoid(v);
    for (double& v : i.data) v = sigmoid(v);
    for (double& v : o.data) v = sigmoid(v);
    for (double& v : g.data) v = tanh_act(v);

    LstmState out{Matrix(hidden_dim_, 1), Matrix(hidden_dim_, 1)};
    Matrix tanh_c(hidden_dim_, 1);
    for (int k = 0; k < hidden_dim_; ++k) {
        out.c(k, 0) = f(k, 0) * prev.c(k, 0) + i(k, 0) * g(k, 0);
        tanh_c(k, 0) = tanh_act(out.c(k, 0));
        out.h(k, 0) = o(k, 0) * tanh_c(k, 0);
    }
    require_finite(out.h, "lstm_step output");

    if (cache) {
        cache->x = x;
        cache->h_prev = prev.h;
        cache->c_prev = prev.c;
        cache->f = std::move(f);
        cache->i = std::move(i);
        cache->o = std::move(o);
        cache->g = std::move(g);
        cache->c = out.c;
        cache->tanh_c = std::move(tanh_c);
    }
    return out;
}

LstmState LstmCell::backward(const Matrix& dh, const Matrix& dc_in, const LstmCache& cache,
                             LstmGrads& grads, Matrix* dx) const {
    check_column(dh, hidden_dim_, "upstream hidden gradient");
    check_column(dc_in, hidden_dim_, "upstream cell gradient");
    if (cache.h_prev.rows != hidden_dim_ || cache.x.rows != input_dim_ ||
        cache.f.rows != hidden_dim_) {
        throw ShapeError("step cache does not match this cell (cache for input " +
                         cache.x.shape_str() + ", hidden " + cache.h_prev.shape_str() + ")");
    }
    if (grads.dW_f.rows != hidden_dim_ || grads.dW_f.cols != hidden_dim_ + input_dim_) {
        throw ShapeError("gradient buffers do not match this cell");
    }

    Matrix da_f(hidden_dim_, 1), da_i(hidden_dim_, 1), da_o(hidden_dim_, 1), da_g(hidden_dim_, 1);
    LstmState prev_grad{Matrix(hidden_dim_, 1), Matrix(hidden_dim_, 1)};
    for (int k = 0; k < hidden_dim_; ++k) {
        const double g = dh(k, 0);
        const double tc = cache.tanh_c(k, 0);
        const double dc = dc_in(k, 0) + g * cache.o(k, 0) * (1.0 - tc * tc);
        da_o(k, 0) = g * tc * dsigmoid_from_value(cache.o(k, 0));
        da_f(k, 0) = dc * cache.c_prev(k, 0) * dsigmoid_from_value(cache.f(k, 0));
        da_i(k, 0) = dc * cache.g(k, 0) * dsigmoid_from_value(cache.i(k, 0));
        da_g(k, 0) = dc * cache.i(k, 0) * dtanh_from_value(cache.g(k, 0));
        prev_grad.c(k, 0) = dc * cache.f(k, 0);
    }

    const Matrix z = vstack(cache.h_prev, cache.x);
    accumulate(grads.dW_f, grads.db_f, da_f, z);
    accumulate(grads.dW_i, grads.db_i, da_i, z);
    accumulate(grads.dW_o, grads.db_o, da_o, z);
    accumulate(grads.dW_g, grads.db_g, da_g, z);

    Matrix dz(hidden_dim_ + input_dim_, 1);
    add_wt_times(dz, W_f, da_f);
    add_wt_times(dz, W_i, da_i);
    add_wt_times(dz, W_o, da_o);
    add_wt_times(dz, W_g, da_g);
    split(dz, &prev_grad.h, dx, hidden_dim_);
    return prev_grad;
}

}  // namespace stocksent
