#pragma once

// Sequential Gram-Schmidt orthogonalization in the E[..] inner product.
//
// For essentially linearly independent regressors there is exactly one
// unit-lower-triangular matrix A (det A = 1 by shape) such that the
// components of AX are pairwise orthogonal. Projecting Y on AX has a
// diagonal Gram matrix; mapping the coefficient back by A^T gives the
// projection coefficient of Y on X, providing a second, independent route
// to the same beta.

#include <cstddef>
#include <span>
#include <vector>

#include "slr/errors.hpp"
#include "slr/linalg.hpp"
#include "slr/moments.hpp"
#include "slr/polynomial.hpp"
#include "slr/projection.hpp"

namespace slr {

struct OrthogonalizationResult {
    Matrix a;                                        // unit lower triangular
    std::vector<PolyRandomVariable> orthogonalized;  // components of A X
};

// Row i of A expresses X_i minus its projections on the already
// orthogonalized components, re-expanded in the original X basis. The
// precondition is positive definiteness of E[X X^T] (this admits the
// constant regressor); a vanishing second moment of an orthogonalized
// component fails with that component's index.
inline OrthogonalizationResult orthogonalize(std::span<const PolyRandomVariable> x,
                                             const SourceList& sources) {
    const std::size_t k = x.size();
    OrthogonalizationResult r;
    r.a = Matrix::identity(k);
    r.orthogonalized.reserve(k);

    double scale = 0.0;
    for (const PolyRandomVariable& xj : x) {
        scale = std::max(scale, expectation(xj * xj, sources));
    }
    const double pivot_tol = kPivotRelTol * std::max(scale, 1e-300);

    std::vector<double> second_moments(k, 0.0);
    for (std::size_t i = 0; i < k; ++i) {
        PolyRandomVariable v = x[i];
        for (std::size_t j = 0; j < i; ++j) {
            const double c = expectation(r.orthogonalized[j] * v, sources) / second_moments[j];
            v -= r.orthogonalized[j] * c;
            for (std::size_t m = 0; m <= j; ++m) r.a(i, m) -= c * r.a(j, m);
        }
        second_moments[i] = expectation(v * v, sources);
        if (!(second_moments[i] > pivot_tol)) {
            throw NotLinearlyIndependentError(i, second_moments[i]);
        }
        r.orthogonalized.push_back(std::move(v));
    }
    return r;
}

// Projection coefficient computed through the orthogonalized basis:
// alpha_j = E[(AX)_j Y] / E[(AX)_j^2], beta = A^T alpha.
inline Vector projection_via_orthogonalization(const PolyRandomVariable& y,
                                               std::span<const PolyRandomVariable> x,
                                               const SourceList& sources) {
    const OrthogonalizationResult orth = orthogonalize(x, sources);
    const std::size_t k = x.size();
    Vector alpha(k);
    for (std::size_t j = 0; j < k; ++j) {
        const PolyRandomVariable& xo = orth.orthogonalized[j];
        alpha[j] = expectation(xo * y, sources) / expectation(xo * xo, sources);
    }
    return matvec(orth.a.transposed(), alpha);
}

}  // namespace slr
