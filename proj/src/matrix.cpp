#include "stocksent/matrix.hpp"

#include <atomic>
#include <cmath>
#include <cstdlib>

#include "stocksent/errors.hpp"

namespace stocksent {

namespace {

std::atomic<bool> g_validate{true};

void require_shape(bool ok, const std::string& msg) {
    if (!ok) throw ShapeError(msg);
}

}  // namespace

Matrix::Matrix(int r, int c, double fill) : rows(r), cols(c) {
    require_shape(r >= 1 && c >= 1,
                  "matrix dimensions must be positive, got " + std::to_string(r) + "x" +
                      std::to_string(c));
    data.assign(static_cast<std::size_t>(r) * static_cast<std::size_t>(c), fill);
}

Matrix Matrix::identity(int n) {
    Matrix m(n, n, 0.0);
    for (int i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

Matrix Matrix::column(const std::vector<double>& values) {
    Matrix m(static_cast<int>(values.size()), 1, 0.0);
    m.data = values;
    return m;
}

std::string Matrix::shape_str() const {
    return std::to_string(rows) + "x" + std::to_string(cols);
}

bool operator==(const Matrix& a, const Matrix& b) {
    return a.rows == b.rows && a.cols == b.cols && a.data == b.data;
}

void set_validation(bool enabled) { g_validate.store(enabled); }

bool validation_enabled() { return g_validate.load(); }

void require_finite(const Matrix& m, const char* where) {
    if (!g_validate.load()) return;
    for (double v : m.data) {
        if (!std::isfinite(v)) {
            throw NumericError(std::string(where) + ": non-finite matrix entry");
        }
    }
}

Matrix matmul(const Matrix& a, const Matrix& b) {
    require_shape(a.cols == b.rows,
                  "matmul shape mismatch: " + a.shape_str() + " * " + b.shape_str());
    require_finite(a, "matmul lhs");
    require_finite(b, "matmul rhs");
    Matrix c(a.rows, b.cols, 0.0);
    const double* pa = a.data.data();
    const double* pb = b.data.data();
    double* pc = c.data.data();
    for (int i = 0; i < a.rows; ++i) {
        for (int k = 0; k < a.cols; ++k) {
            const double aik = pa[static_cast<std::size_t>(i) * a.cols + k];
            if (aik == 0.0) continue;
            const double* brow = pb + static_cast<std::size_t>(k) * b.cols;
            double* crow = pc + static_cast<std::size_t>(i) * b.cols;
            for (int j = 0; j < b.cols; ++j) crow[j] += aik * brow[j];
        }
    }
    require_finite(c, "matmul result");
    return c;
}

Matrix transpose(const Matrix& m) {
    Matrix t(m.cols, m.rows, 0.0);
    for (int i = 0; i < m.rows; ++i)
        for (int j = 0; j < m.cols; ++j) t(j, i) = m(i, j);
    return t;
}

namespace {

Matrix elementwise(const Matrix& a, const Matrix& b, const char* name,
                   double (*op)(double, double)) {
    require_shape(a.same_shape(b), std::string(name) + " shape mismatch: " + a.shape_str() +
                                       " vs " + b.shape_str());
    require_finite(a, name);
    require_finite(b, name);
    Matrix c(a.rows, a.cols, 0.0);
    for (std::size_t i = 0; i < a.size(); ++i) c.data[i] = op(a.data[i], b.data[i]);
    return c;
}

}  // namespace

Matrix add(const Matrix& a, const Matrix& b) {
    return elementwise(a, b, "add", [](double x, double y) { return x + y; });
}

Matrix sub(const Matrix& a, const Matrix& b) {
    return elementwise(a, b, "sub", [](double x, double y) { return x - y; });
}

Matrix hadamard(const Matrix& a, const Matrix& b) {
    return elementwise(a, b, "hadamard", [](double x, double y) { return x * y; });
}

Matrix scale(const Matrix& m, double s) {
    require_finite(m, "scale");
    Matrix c = m;
    for (double& v : c.data) v *= s;
    require_finite(c, "scale result");
    return c;
}

void axpy(Matrix& a, double s, const Matrix& b) {
    require_shape(a.same_shape(b),
                  "axpy shape mismatch: " + a.shape_str() + " vs " + b.shape_str());
    for (std::size_t i = 0; i < a.size(); ++i) a.data[i] += s * b.data[i];
}

double max_abs(const Matrix& m) {
    double best = 0.0;
    for (double v : m.data) best = std::max(best, std::fabs(v));
    return best;
}

}  // namespace stocksent
