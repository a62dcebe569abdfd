#pragma once

// Exact expectation engine over polynomials of independent sources.
//
// E[p] factorizes monomial by monomial: independence turns the expectation
// of each monomial into a product of per-source raw moments. All identities
// are exact up to floating-point rounding; nothing is estimated.
//
// Conditioning is defined on subsets of source symbols, not on arbitrary
// sigma-algebras. conditional_expectation(p, S) integrates out every
// monomial factor in sources outside S, which equals E(p || X) whenever
// each conditioning variable X_j is itself a single source. That covers
// every separable polynomial form used here; sigma-algebra equality for a
// general polynomial X is not decidable in this representation and is not
// attempted.

#include <cmath>
#include <set>
#include <string>
#include <utility>

#include "slr/errors.hpp"
#include "slr/polynomial.hpp"
#include "slr/source_distribution.hpp"

namespace slr {

// E[p] = sum over monomials of coeff * prod_j raw_moment(source_j, exp_j).
// Every symbol in p must be declared in `sources`.
inline double expectation(const PolyRandomVariable& p, const SourceList& sources) {
    double total = 0.0;
    for (const auto& [m, c] : p.terms()) {
        double t = c;
        for (const auto& [sym, e] : m) {
            t *= sources.by_name(sym).raw_moment(e);
        }
        total += t;
    }
    return total;
}

// K(p, q) = E[pq] - E[p] E[q].
inline double covariance(const PolyRandomVariable& p, const PolyRandomVariable& q,
                         const SourceList& sources) {
    return expectation(p * q, sources) - expectation(p, sources) * expectation(q, sources);
}

// E(Y || X) in regression-function form: a polynomial supported only on
// the conditioning sources.
struct ConditionalExpectationForm {
    std::set<std::string> conditioning;
    PolyRandomVariable regression;
};

inline ConditionalExpectationForm conditional_expectation(const PolyRandomVariable& p,
                                                          std::set<std::string> conditioning,
                                                          const SourceList& sources) {
    for (const std::string& sym : conditioning) {
        (void)sources.index_of(sym);  // must be declared
    }
    PolyRandomVariable result;
    for (const auto& [m, c] : p.terms()) {
        Monomial kept;
        double factor = c;
        for (const auto& [sym, e] : m) {
            if (conditioning.count(sym)) {
                kept[sym] = e;
            } else {
                // Independence: integrate the factor out as its raw moment.
                factor *= sources.by_name(sym).raw_moment(e);
            }
        }
        result += PolyRandomVariable::monomial(factor, std::move(kept));
    }
    return ConditionalExpectationForm{std::move(conditioning), std::move(result)};
}

// True iff E(p || S) is a constant: every non-constant coefficient of the
// regression polynomial has magnitude <= tol.
inline bool is_mean_independent(const PolyRandomVariable& p,
                                std::set<std::string> conditioning,
                                const SourceList& sources, double tol = kDefaultTol) {
    return conditional_expectation(p, std::move(conditioning), sources)
        .regression.is_constant(tol);
}

}  // namespace slr
