#pragma once

// Minimal dense linear algebra for the small (k <= ~10) symmetric systems
// this library solves. The positive-definite solver reports failure as a
// model violation with the offending pivot index; it never regularizes.

#include <cmath>
#include <cstddef>
#include <vector>

#include "slr/errors.hpp"

namespace slr {

using Vector = std::vector<double>;

class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    static Matrix identity(std::size_t n) {
        Matrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    double max_abs() const {
        double m = 0.0;
        for (double v : data_) m = std::max(m, std::abs(v));
        return m;
    }

    double max_abs_diag() const {
        double m = 0.0;
        for (std::size_t i = 0; i < std::min(rows_, cols_); ++i) {
            m = std::max(m, std::abs((*this)(i, i)));
        }
        return m;
    }

    Matrix transposed() const {
        Matrix t(cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i) {
            for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
        }
        return t;
    }

    friend bool operator==(const Matrix&, const Matrix&) = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

inline Vector matvec(const Matrix& a, const Vector& x) {
    Vector y(a.rows(), 0.0);
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < a.cols(); ++j) y[i] += a(i, j) * x[j];
    }
    return y;
}

inline Matrix matmul(const Matrix& a, const Matrix& b) {
    Matrix c(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const double v = a(i, k);
            for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += v * b(k, j);
        }
    }
    return c;
}

inline double sup_norm(const Vector& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

inline double sup_distance(const Vector& a, const Vector& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

// Relative pivot tolerance for positive-definite factorizations.
inline constexpr double kPivotRelTol = 1e-12;

// Cholesky factor L (lower triangular, A = L L^T). A pivot at or below
// kPivotRelTol * max diagonal of A fails with its index.
inline Matrix cholesky_factor(const Matrix& a) {
    const std::size_t n = a.rows();
    const double tol = kPivotRelTol * std::max(a.max_abs_diag(), 1e-300);
    Matrix l(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j <= i; ++j) {
            double s = a(i, j);
            for (std::size_t m = 0; m < j; ++m) s -= l(i, m) * l(j, m);
            if (i == j) {
                if (!(s > tol)) throw NotLinearlyIndependentError(i, s);
                l(i, i) = std::sqrt(s);
            } else {
                l(i, j) = s / l(j, j);
            }
        }
    }
    return l;
}

// Solve A x = b for symmetric positive-definite A. This is the single
// normal-equations solver shared by the population projection formula and
// the sample least-squares estimator.
inline Vector spd_solve(const Matrix& a, const Vector& b) {
    const std::size_t n = a.rows();
    const Matrix l = cholesky_factor(a);
    Vector y(n);
    for (std::size_t i = 0; i < n; ++i) {
        double s = b[i];
        for (std::size_t j = 0; j < i; ++j) s -= l(i, j) * y[j];
        y[i] = s / l(i, i);
    }
    Vector x(n);
    for (std::size_t i = n; i-- > 0;) {
        double s = y[i];
        for (std::size_t j = i + 1; j < n; ++j) s -= l(j, i) * x[j];
        x[i] = s / l(i, i);
    }
    return x;
}

}  // namespace slr
