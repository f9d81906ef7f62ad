#pragma once

#include <string>
#include <vector>

namespace stocksent {

// Dense row-major matrix of 64-bit reals. Column vectors are n x 1 matrices.
// Public kernel operations validate shapes always and entry finiteness when
// validation mode is on (default). Inner training loops use fused private
// kernels instead, so the strict checks cost nothing on the hot path.
struct Matrix {
    int rows = 0;
    int cols = 0;
    std::vector<double> data;

    Matrix() = default;
    Matrix(int r, int c, double fill = 0.0);

    static Matrix identity(int n);
    static Matrix column(const std::vector<double>& values);

    double& operator()(int i, int j) { return data[static_cast<std::size_t>(i) * cols + j]; }
    double operator()(int i, int j) const { return data[static_cast<std::size_t>(i) * cols + j]; }

    std::size_t size() const { return data.size(); }
    bool same_shape(const Matrix& other) const {
        return rows == other.rows && cols == other.cols;
    }
    std::string shape_str() const;
};

bool operator==(const Matrix& a, const Matrix& b);

// Toggles finiteness validation on kernel inputs and outputs. On by default.
void set_validation(bool enabled);
bool validation_enabled();

// Throws NumericError if any entry is non-finite (validation mode only).
void require_finite(const Matrix& m, const char* where);

Matrix matmul(const Matrix& a, const Matrix& b);
Matrix transpose(const Matrix& m);
Matrix add(const Matrix& a, const Matrix& b);
Matrix sub(const Matrix& a, const Matrix& b);
Matrix hadamard(const Matrix& a, const Matrix& b);
Matrix scale(const Matrix& m, double s);

// a += s * b, shapes must match.
void axpy(Matrix& a, double s, const Matrix& b);

double max_abs(const Matrix& m);

}  // namespace stocksent
