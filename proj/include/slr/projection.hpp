#pragma once

// Orthogonal projection in the E[..] inner product.
//
// For square-integrable Y and regressors X_1..X_k with positive-definite
// second-moment Gram matrix, the projection coefficient
// beta = (E[X X^T])^{-1} E[X Y] is unique, and the canonical error
// eps = Y - X^T beta is the unique L2 variable orthogonal to every X_j.
// The coefficient is also the unique minimizer of b -> E[(Y - X^T b)^2].

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "slr/linalg.hpp"
#include "slr/moments.hpp"
#include "slr/polynomial.hpp"
#include "slr/source_distribution.hpp"

namespace slr {

// Entry (i, j) = E[X_i X_j]; symmetric by construction.
inline Matrix gram_matrix(std::span<const PolyRandomVariable> x, const SourceList& sources) {
    const std::size_t k = x.size();
    Matrix g(k, k);
    for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = i; j < k; ++j) {
            g(i, j) = g(j, i) = expectation(x[i] * x[j], sources);
        }
    }
    return g;
}

// E[X_j Y] for each regressor.
inline Vector cross_moments(const PolyRandomVariable& y,
                            std::span<const PolyRandomVariable> x,
                            const SourceList& sources) {
    Vector c(x.size());
    for (std::size_t j = 0; j < x.size(); ++j) c[j] = expectation(x[j] * y, sources);
    return c;
}

inline bool pairwise_orthogonal(const Matrix& gram, double tol = kDefaultTol) {
    const double scale = 1.0 + gram.max_abs_diag();
    for (std::size_t i = 0; i < gram.rows(); ++i) {
        for (std::size_t j = i + 1; j < gram.cols(); ++j) {
            if (std::abs(gram(i, j)) > tol * scale) return false;
        }
    }
    return true;
}

// Unique solution of (E[X X^T]) beta = E[X Y].
inline Vector projection_coefficient(const PolyRandomVariable& y,
                                     std::span<const PolyRandomVariable> x,
                                     const SourceList& sources) {
    return spd_solve(gram_matrix(x, sources), cross_moments(y, x, sources));
}

struct ProjectionResult {
    Vector beta;
    PolyRandomVariable canonical_error;  // Y - sum_j X_j beta_j, exactly
    Matrix gram;                         // E[X X^T]
    Vector cross;                        // E[X Y]
    double mse_at_beta = 0.0;
    bool regressors_orthogonal = false;  // diagnostics: was {X_j} orthogonal
};

// E[(Y - X^T b)^2].
inline double mse(const PolyRandomVariable& y, std::span<const PolyRandomVariable> x,
                  const Vector& b, const SourceList& sources) {
    PolyRandomVariable residual = y;
    for (std::size_t j = 0; j < x.size(); ++j) residual -= x[j] * b[j];
    const double v = expectation(residual * residual, sources);
    return std::max(v, 0.0);
}

inline ProjectionResult decompose(const PolyRandomVariable& y,
                                  std::span<const PolyRandomVariable> x,
                                  const SourceList& sources) {
    ProjectionResult r;
    r.gram = gram_matrix(x, sources);
    r.cross = cross_moments(y, x, sources);
    r.beta = spd_solve(r.gram, r.cross);
    r.canonical_error = y;
    for (std::size_t j = 0; j < x.size(); ++j) r.canonical_error -= x[j] * r.beta[j];
    r.mse_at_beta = std::max(expectation(r.canonical_error * r.canonical_error, sources), 0.0);
    r.regressors_orthogonal = pairwise_orthogonal(r.gram);
    return r;
}

// Zero-mean / uncorrelatedness report for a canonical error. With a
// nonzero constant regressor present, orthogonality forces E[eps] = 0 and
// hence K(X_j, eps) = 0 for every j. Without one, only orthogonality
// E[X_j eps] = 0 is guaranteed and the report flags that uncorrelatedness
// is not implied.
struct OrthogonalityReport {
    bool has_constant_regressor = false;
    bool uncorrelatedness_implied = false;  // false raises the flag
    double error_mean = 0.0;
    Vector regressor_error_moments;      // E[X_j eps]
    Vector regressor_error_covariances;  // K(X_j, eps)
    bool orthogonality_ok = false;
    bool zero_mean_ok = false;
    bool uncorrelated_ok = false;
};

inline OrthogonalityReport check_zero_mean_and_uncorrelated(
    const ProjectionResult& result, std::span<const PolyRandomVariable> x,
    const SourceList& sources, double tol = kDefaultTol) {
    OrthogonalityReport rep;
    const PolyRandomVariable& eps = result.canonical_error;
    for (const PolyRandomVariable& xj : x) {
        if (xj.is_constant() && !xj.is_zero()) rep.has_constant_regressor = true;
    }
    rep.uncorrelatedness_implied = rep.has_constant_regressor;
    rep.error_mean = expectation(eps, sources);
    const double scale = 1.0 + result.gram.max_abs();
    rep.orthogonality_ok = true;
    rep.uncorrelated_ok = true;
    for (const PolyRandomVariable& xj : x) {
        rep.regressor_error_moments.push_back(expectation(xj * eps, sources));
        rep.regressor_error_covariances.push_back(covariance(xj, eps, sources));
        if (std::abs(rep.regressor_error_moments.back()) > tol * scale) {
            rep.orthogonality_ok = false;
        }
        if (std::abs(rep.regressor_error_covariances.back()) > tol * scale) {
            rep.uncorrelated_ok = false;
        }
    }
    rep.zero_mean_ok = std::abs(rep.error_mean) <= tol * scale;
    return rep;
}

}  // namespace slr
