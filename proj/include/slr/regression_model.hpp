#pragma once

// Stochastic linear regression as a class of probability measures.
//
// A random vector (Y, X_1..X_k) of square-integrable polynomials is
// fundamental when no X_j is concentrated on {0} (E[X_j^2] > 0) and the
// X_j are pairwise orthogonal. Membership of the induced distribution in
// the regression model is equivalent to the vector being fundamental, so
// validation doubles as the membership test. Members partition into
// disjoint families indexed by their unique projection coefficient;
// classify() recovers that index.

#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "slr/errors.hpp"
#include "slr/linalg.hpp"
#include "slr/moments.hpp"
#include "slr/polynomial.hpp"
#include "slr/projection.hpp"
#include "slr/source_distribution.hpp"

namespace slr {

// The fundamental random vector (Y, X_1..X_k) over a shared source list.
struct RandomVectorSpec {
    SourceList sources;
    PolyRandomVariable y;
    std::vector<PolyRandomVariable> x;

    std::size_t k() const { return x.size(); }
};

struct CrossMomentCheck {
    std::size_t i = 0;
    std::size_t j = 0;
    double value = 0.0;
    bool orthogonal = false;
};

struct ModelDiagnosis {
    bool l2_finite = true;  // polynomials over these sources always are
    double y_second_moment = 0.0;
    Vector x_second_moments;
    std::vector<bool> nondegenerate;            // E[X_j^2] > 0, per j
    std::vector<CrossMomentCheck> orthogonal_set;  // per pair j < j'
    bool gram_pd = false;
    bool is_fundamental = false;
    bool is_member = false;
};

inline ModelDiagnosis validate_fundamental(const RandomVectorSpec& spec,
                                           double tol = kDefaultTol) {
    ModelDiagnosis d;
    d.y_second_moment = expectation(spec.y * spec.y, spec.sources);
    for (const PolyRandomVariable& xj : spec.x) {
        d.x_second_moments.push_back(expectation(xj * xj, spec.sources));
    }
    double scale = 1.0;
    for (double m : d.x_second_moments) scale = std::max(scale, 1.0 + m);

    bool all_nondegenerate = true;
    for (double m : d.x_second_moments) {
        const bool ok = m > tol * scale;
        d.nondegenerate.push_back(ok);
        all_nondegenerate = all_nondegenerate && ok;
    }

    bool all_orthogonal = true;
    for (std::size_t i = 0; i < spec.k(); ++i) {
        for (std::size_t j = i + 1; j < spec.k(); ++j) {
            CrossMomentCheck c;
            c.i = i;
            c.j = j;
            c.value = expectation(spec.x[i] * spec.x[j], spec.sources);
            c.orthogonal = std::abs(c.value) <= tol * scale;
            all_orthogonal = all_orthogonal && c.orthogonal;
            d.orthogonal_set.push_back(c);
        }
    }

    try {
        (void)cholesky_factor(gram_matrix(spec.x, spec.sources));
        d.gram_pd = true;
    } catch (const NotLinearlyIndependentError&) {
        d.gram_pd = false;
    }

    d.is_fundamental = d.l2_finite && all_nondegenerate && all_orthogonal;
    d.is_member = d.is_fundamental;
    return d;
}

inline bool is_stochastic_linear_regression(const RandomVectorSpec& spec,
                                            double tol = kDefaultTol) {
    return validate_fundamental(spec, tol).is_fundamental;
}

// Builds Y := sum_j X_j beta_j + eta. Requires {eta, X_1..X_k} pairwise
// orthogonal and every X_j nondegenerate; violations are reported per pair.
inline RandomVectorSpec make_family_member(const SourceList& sources,
                                           std::vector<PolyRandomVariable> x,
                                           const Vector& beta,
                                           const PolyRandomVariable& eta,
                                           double tol = kDefaultTol) {
    if (beta.size() != x.size()) {
        throw PreconditionError("beta has length " + std::to_string(beta.size()) +
                                " but there are " + std::to_string(x.size()) + " regressors");
    }
    double scale = 1.0 + expectation(eta * eta, sources);
    for (const PolyRandomVariable& xj : x) {
        scale = std::max(scale, 1.0 + expectation(xj * xj, sources));
    }

    std::string violations;
    auto note = [&violations](const std::string& line) {
        violations += violations.empty() ? line : "; " + line;
    };
    for (std::size_t j = 0; j < x.size(); ++j) {
        if (!(expectation(x[j] * x[j], sources) > tol * scale)) {
            note("X_" + std::to_string(j + 1) + " is degenerate at 0");
        }
        const double m = expectation(eta * x[j], sources);
        if (std::abs(m) > tol * scale) {
            note("eta and X_" + std::to_string(j + 1) + " are not orthogonal (E = " +
                 std::to_string(m) + ")");
        }
        for (std::size_t i = j + 1; i < x.size(); ++i) {
            const double mm = expectation(x[j] * x[i], sources);
            if (std::abs(mm) > tol * scale) {
                note("X_" + std::to_string(j + 1) + " and X_" + std::to_string(i + 1) +
                     " are not orthogonal (E = " + std::to_string(mm) + ")");
            }
        }
    }
    if (!violations.empty()) throw PreconditionError(violations);

    RandomVectorSpec spec;
    spec.sources = sources;
    spec.x = std::move(x);
    spec.y = eta;
    for (std::size_t j = 0; j < spec.x.size(); ++j) spec.y += spec.x[j] * beta[j];
    return spec;
}

// The unique beta whose family contains this member: the projection
// coefficient of Y on X. Non-members are rejected.
inline Vector classify(const RandomVectorSpec& spec, double tol = kDefaultTol) {
    if (!is_stochastic_linear_regression(spec, tol)) {
        throw MembershipError("random vector is not a member of the regression model");
    }
    return projection_coefficient(spec.y, spec.x, spec.sources);
}

struct InjectivityEntry {
    Vector beta;
    Vector recovered;
    double recovery_error = 0.0;  // sup-norm
};

struct InjectivityReport {
    std::vector<InjectivityEntry> entries;
    double max_recovery_error = 0.0;
    // min over pairs of (recovered gap - requested gap); >= -1e-9 means
    // distinct requested coefficients stayed distinct after recovery.
    double worst_gap_defect = 0.0;
    bool injective = false;
};

// classify . make_family_member should be the identity on betas.
inline InjectivityReport check_injectivity(const SourceList& sources,
                                           const std::vector<PolyRandomVariable>& x,
                                           const PolyRandomVariable& eta,
                                           const std::vector<Vector>& betas,
                                           double tol = 1e-9) {
    InjectivityReport rep;
    for (const Vector& beta : betas) {
        const RandomVectorSpec member = make_family_member(sources, x, beta, eta);
        InjectivityEntry e;
        e.beta = beta;
        e.recovered = classify(member);
        e.recovery_error = sup_distance(e.beta, e.recovered);
        rep.max_recovery_error = std::max(rep.max_recovery_error, e.recovery_error);
        rep.entries.push_back(std::move(e));
    }
    rep.injective = rep.max_recovery_error <= tol;
    for (std::size_t i = 0; i < rep.entries.size(); ++i) {
        for (std::size_t j = i + 1; j < rep.entries.size(); ++j) {
            const double requested =
                sup_distance(rep.entries[i].beta, rep.entries[j].beta);
            const double recovered =
                sup_distance(rep.entries[i].recovered, rep.entries[j].recovered);
            rep.worst_gap_defect = std::min(rep.worst_gap_defect, recovered - requested);
            if (recovered < requested - tol) rep.injective = false;
        }
    }
    return rep;
}

}  // namespace slr
