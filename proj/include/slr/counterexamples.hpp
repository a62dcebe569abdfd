#pragma once

// Catalog of distinguishing examples, verified exactly and by simulation.
//
// The shipped cases separate three notions that are routinely conflated
// around linear regression:
//
//   theorem1-gaussian        orthogonality without mean independence
//                            (X symmetric, eps = X^2)
//   example1-product         same phenomenon on a Rademacher x Gaussian
//                            product space (X = pi2, eps = pi1 + pi2^2)
//   corollary1               orthogonal projection and conditional
//                            expectation both exist and disagree
//                            (Y = X + X^2, projection is X)
//   theorem3-orth-not-uncorr orthogonal but correlated
//                            (X = xi + sqrt(t), eps = xi - sqrt(t))
//   theorem3-uncorr-not-orth uncorrelated but not orthogonal
//                            (X = t xi^2, eps = xi/t + t, xi Rademacher)
//
// Each case carries machine-checkable claims; verify() evaluates them with
// the exact moment engine, or estimates the moment-valued ones from n
// seeded samples and requires agreement within 5 estimated standard errors.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <map>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "slr/errors.hpp"
#include "slr/linalg.hpp"
#include "slr/moments.hpp"
#include "slr/polynomial.hpp"
#include "slr/projection.hpp"
#include "slr/simulation.hpp"
#include "slr/source_distribution.hpp"

namespace slr {

struct MomentClaim {
    std::string label;
    PolyRandomVariable expr;
    double expected = 0.0;
    double tolerance = kDefaultTol;
};

// The expression must have a finite expectation (L1/L2 style checks).
struct FiniteMomentClaim {
    std::string label;
    PolyRandomVariable expr;
};

struct CovarianceClaim {
    std::string label;
    PolyRandomVariable a;
    PolyRandomVariable b;
    double expected = 0.0;
    double tolerance = kDefaultTol;
};

// E(expr || given) must equal expected_form as a polynomial; optionally it
// must also be non-constant.
struct ConditionalFormClaim {
    std::string label;
    PolyRandomVariable expr;
    std::set<std::string> given;
    PolyRandomVariable expected_form;
    bool require_nonconstant = false;
    double tolerance = kDefaultTol;
};

struct ProjectionClaim {
    std::string label;
    PolyRandomVariable y;
    std::vector<PolyRandomVariable> regressors;
    Vector expected;
    double tolerance = kDefaultTol;
};

using Claim = std::variant<MomentClaim, FiniteMomentClaim, CovarianceClaim,
                           ConditionalFormClaim, ProjectionClaim>;

struct CounterexampleCase {
    std::string name;
    SourceList sources;
    std::map<std::string, PolyRandomVariable> variables;
    std::map<std::string, double> parameters;
    std::vector<Claim> claims;
};

// --- builders ---------------------------------------------------------

// X any nondegenerate single source with E[X^3] = 0 whose square is not
// degenerate; eps := X^2 is orthogonal to X yet fully determined by it.
// Sources whose square is a.s. constant (e.g. Rademacher) are rejected:
// for them eps is degenerate and mean independence holds trivially.
inline CounterexampleCase orthogonal_but_mean_dependent(const SourceDistribution& x_source) {
    const double m2 = x_source.raw_moment(2);
    const double m3 = x_source.raw_moment(3);
    const double m4 = x_source.raw_moment(4);
    if (std::abs(m3) > kDefaultTol) {
        throw PreconditionError("E[X^3] = " + std::to_string(m3) + " is not 0");
    }
    if (!(m2 > kDefaultTol)) {
        throw PreconditionError("X is degenerate at 0");
    }
    if (!(m4 - m2 * m2 > kDefaultTol)) {
        throw PreconditionError("X^2 is degenerate; the witness eps = X^2 would be "
                                "mean independent trivially");
    }

    CounterexampleCase c;
    c.name = "theorem1-gaussian";
    c.sources = SourceList{x_source};
    const PolyRandomVariable x = PolyRandomVariable::source(x_source.name());
    const PolyRandomVariable eps = x * x;
    c.variables = {{"X", x}, {"eps", eps}};
    c.claims.push_back(MomentClaim{"E[X*eps] = 0", x * eps, 0.0, 1e-12});
    c.claims.push_back(ConditionalFormClaim{"E(eps || X) = X^2, non-constant", eps,
                                            {x_source.name()}, eps, true, kDefaultTol});
    c.claims.push_back(FiniteMomentClaim{"eps is L1", eps});
    return c;
}

// Product of an independent Rademacher pi1 and standard Gaussian pi2;
// X := pi2, eps := pi1 + pi2^2. The regression function of eps on X is
// x -> x^2, whose law is chi-squared with one degree of freedom; the
// chi-squared identity is certified at moment level (mean 1, variance 2,
// third central moment 8).
inline CounterexampleCase rademacher_gaussian_product() {
    CounterexampleCase c;
    c.name = "example1-product";
    c.sources = SourceList{SourceDistribution::rademacher("pi1"),
                           SourceDistribution::gaussian("pi2", 1.0)};
    const PolyRandomVariable pi1 = PolyRandomVariable::source("pi1");
    const PolyRandomVariable pi2 = PolyRandomVariable::source("pi2");
    const PolyRandomVariable x = pi2;
    const PolyRandomVariable eps = pi1 + pi2 * pi2;
    c.variables = {{"X", x}, {"eps", eps}};

    const PolyRandomVariable w = pi2 * pi2;
    const PolyRandomVariable w_centered = w - PolyRandomVariable::constant(1.0);
    c.claims.push_back(MomentClaim{"E[X*eps] = 0", x * eps, 0.0, 1e-12});
    c.claims.push_back(ConditionalFormClaim{"E(eps || pi2) = pi2^2, non-constant", eps,
                                            {"pi2"}, w, true, kDefaultTol});
    c.claims.push_back(MomentClaim{"E[eps] = 1", eps, 1.0, 1e-12});
    c.claims.push_back(MomentClaim{"E[pi2^2] = 1 (chi-square mean)", w, 1.0, kDefaultTol});
    c.claims.push_back(MomentClaim{"Var[pi2^2] = 2 (chi-square variance)",
                                   w_centered * w_centered, 2.0, kDefaultTol});
    c.claims.push_back(MomentClaim{"E[(pi2^2 - 1)^3] = 8 (chi-square skewness)",
                                   w_centered * w_centered * w_centered, 8.0, kDefaultTol});
    return c;
}

// Y := X + X^2 with X ~ N(0, sigma^2). The projection of Y on X is X
// (coefficient 1, for every sigma), whereas the conditional expectation
// is X + X^2; the disagreement witness X^2 has E[(X^2)^2] = 3 sigma^4.
inline CounterexampleCase projection_vs_conditional_expectation(double sigma) {
    if (!(sigma > 0.0)) throw PreconditionError("sigma must be positive");
    CounterexampleCase c;
    c.name = "corollary1";
    c.parameters["sigma"] = sigma;
    c.sources = SourceList{SourceDistribution::gaussian("X", sigma * sigma)};
    const PolyRandomVariable x = PolyRandomVariable::source("X");
    const PolyRandomVariable y = x + x * x;
    const PolyRandomVariable witness = x * x;
    c.variables = {{"X", x}, {"Y", y}, {"witness", witness}};

    c.claims.push_back(ProjectionClaim{"projection coefficient of Y on X = 1", y, {x},
                                       Vector{1.0}, 1e-12});
    c.claims.push_back(ConditionalFormClaim{"E(Y || X) = X + X^2", y, {"X"}, y, true,
                                            kDefaultTol});
    const double s4 = 3.0 * sigma * sigma * sigma * sigma;
    c.claims.push_back(MomentClaim{"E[(X^2)^2] = 3 sigma^4 (disagreement witness)",
                                   witness * witness, s4, kDefaultTol});
    return c;
}

// X := xi + sqrt(t), eps := xi - sqrt(t) with xi ~ N(0, t): exactly
// orthogonal, yet K(X, eps) = t > 0.
inline CounterexampleCase orthogonal_but_correlated(double t) {
    if (!(t > 0.0)) throw PreconditionError("t must be positive");
    CounterexampleCase c;
    c.name = "theorem3-orth-not-uncorr";
    c.parameters["t"] = t;
    c.sources = SourceList{SourceDistribution::gaussian("xi", t)};
    const PolyRandomVariable xi = PolyRandomVariable::source("xi");
    const double root_t = std::sqrt(t);
    const PolyRandomVariable x = xi + PolyRandomVariable::constant(root_t);
    const PolyRandomVariable eps = xi - PolyRandomVariable::constant(root_t);
    c.variables = {{"X", x}, {"eps", eps}};
    c.claims.push_back(MomentClaim{"E[X*eps] = 0", x * eps, 0.0, 1e-12});
    c.claims.push_back(CovarianceClaim{"K(X, eps) = t", x, eps, t, 1e-12});
    return c;
}

// X := t xi^2, eps := (t xi)^{-1} + t with xi Rademacher. On {-1, +1} the
// reciprocal of xi is xi itself, so eps is encoded as (1/t) xi + t. Then
// E[X eps] = t^2 > 0 while K(X, eps) = 0.
inline CounterexampleCase uncorrelated_but_not_orthogonal(double t) {
    if (!(t > 0.0)) throw PreconditionError("t must be positive");
    CounterexampleCase c;
    c.name = "theorem3-uncorr-not-orth";
    c.parameters["t"] = t;
    c.sources = SourceList{SourceDistribution::rademacher("xi")};
    const PolyRandomVariable xi = PolyRandomVariable::source("xi");
    const PolyRandomVariable x = t * (xi * xi);
    const PolyRandomVariable eps = xi * (1.0 / t) + PolyRandomVariable::constant(t);
    c.variables = {{"X", x}, {"eps", eps}};
    c.claims.push_back(MomentClaim{"E[X*eps] = t^2", x * eps, t * t, 1e-12});
    c.claims.push_back(CovarianceClaim{"K(X, eps) = 0", x, eps, 0.0, 1e-12});
    c.claims.push_back(MomentClaim{"E[X] = t", x, t, 1e-12});
    c.claims.push_back(MomentClaim{"E[eps] = t", eps, t, 1e-12});
    return c;
}

inline std::vector<std::string> counterexample_names() {
    return {"theorem1-gaussian", "example1-product", "corollary1",
            "theorem3-orth-not-uncorr", "theorem3-uncorr-not-orth"};
}

// Builds a case by its registry name. `t` and `sigma` are read when the
// case uses them; unused parameters are ignored.
inline CounterexampleCase build_named_case(const std::string& name, double t = 1.0,
                                           double sigma = 1.0) {
    if (name == "theorem1-gaussian") {
        return orthogonal_but_mean_dependent(
            SourceDistribution::gaussian("X", sigma * sigma));
    }
    if (name == "example1-product") return rademacher_gaussian_product();
    if (name == "corollary1") return projection_vs_conditional_expectation(sigma);
    if (name == "theorem3-orth-not-uncorr") return orthogonal_but_correlated(t);
    if (name == "theorem3-uncorr-not-orth") return uncorrelated_but_not_orthogonal(t);
    throw std::invalid_argument("unknown counterexample: " + name);
}

// --- verification -----------------------------------------------------

struct ClaimResult {
    std::string label;
    std::string method;  // "exact" or "monte-carlo"
    double expected = std::numeric_limits<double>::quiet_NaN();
    double computed = std::numeric_limits<double>::quiet_NaN();
    double std_error = 0.0;  // monte-carlo only
    bool passed = false;
    std::string detail;
};

struct VerificationReport {
    std::string case_name;
    std::string mode;
    std::vector<ClaimResult> results;

    bool all_passed() const {
        for (const ClaimResult& r : results) {
            if (!r.passed) return false;
        }
        return true;
    }
};

namespace detail {

inline bool within(double computed, double expected, double tol) {
    return std::abs(computed - expected) <= tol * (1.0 + std::abs(expected));
}

struct ExactVerifier {
    const SourceList& sources;

    ClaimResult operator()(const MomentClaim& c) const {
        ClaimResult r;
        r.label = c.label;
        r.method = "exact";
        r.expected = c.expected;
        r.computed = expectation(c.expr, sources);
        r.passed = within(r.computed, r.expected, c.tolerance);
        return r;
    }

    ClaimResult operator()(const FiniteMomentClaim& c) const {
        ClaimResult r;
        r.label = c.label;
        r.method = "exact";
        r.computed = expectation(c.expr, sources);
        r.passed = std::isfinite(r.computed);
        r.detail = "finite expectation";
        return r;
    }

    ClaimResult operator()(const CovarianceClaim& c) const {
        ClaimResult r;
        r.label = c.label;
        r.method = "exact";
        r.expected = c.expected;
        r.computed = covariance(c.a, c.b, sources);
        r.passed = within(r.computed, r.expected, c.tolerance);
        return r;
    }

    ClaimResult operator()(const ConditionalFormClaim& c) const {
        ClaimResult r;
        r.label = c.label;
        r.method = "exact";
        const ConditionalExpectationForm f = conditional_expectation(c.expr, c.given, sources);
        const PolyRandomVariable diff = f.regression - c.expected_form;
        bool equal = true;
        for (const auto& [m, coeff] : diff.terms()) {
            if (std::abs(coeff) > c.tolerance) equal = false;
        }
        r.passed = equal;
        r.detail = "regression polynomial = " + f.regression.str();
        if (c.require_nonconstant && f.regression.is_constant(c.tolerance)) {
            r.passed = false;
            r.detail += " (constant, expected non-constant)";
        }
        return r;
    }

    ClaimResult operator()(const ProjectionClaim& c) const {
        ClaimResult r;
        r.label = c.label;
        r.method = "exact";
        const Vector beta = projection_coefficient(c.y, c.regressors, sources);
        r.computed = c.expected.size() == 1 ? beta[0] : sup_distance(beta, c.expected);
        r.expected = c.expected.size() == 1 ? c.expected[0] : 0.0;
        r.passed = sup_distance(beta, c.expected) <= c.tolerance * (1.0 + sup_norm(c.expected));
        r.detail = "beta has " + std::to_string(beta.size()) + " component(s)";
        return r;
    }
};

// Sample-mean statistics of a compiled expression over drawn source rows.
struct SampleStats {
    double mean = 0.0;
    double sd = 0.0;

    double std_error(std::size_t n) const { return sd / std::sqrt(static_cast<double>(n)); }
};

inline SampleStats column_stats(const std::vector<double>& v) {
    SampleStats s;
    for (double x : v) s.mean += x;
    s.mean /= static_cast<double>(v.size());
    double ss = 0.0;
    for (double x : v) ss += (x - s.mean) * (x - s.mean);
    s.sd = std::sqrt(ss / static_cast<double>(v.size()));
    return s;
}

inline std::vector<double> eval_column(const PolyRandomVariable& p, const SourceList& sources,
                                       const std::vector<std::vector<double>>& source_cols) {
    const CompiledPoly cp(p, sources);
    const std::size_t n = source_cols.empty() ? 0 : source_cols[0].size();
    std::vector<double> out(n);
    std::vector<double> row(source_cols.size());
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t s = 0; s < source_cols.size(); ++s) row[s] = source_cols[s][i];
        out[i] = cp.eval(row);
    }
    return out;
}

struct MonteCarloVerifier {
    const SourceList& sources;
    const std::vector<std::vector<double>>& source_cols;
    std::size_t n;

    // 5 estimated standard errors, with a tiny absolute floor so that
    // claims whose sample is exactly constant still compare sanely.
    bool within_5se(double computed, double expected, double se) const {
        return std::abs(computed - expected) <= 5.0 * se + 1e-12 * (1.0 + std::abs(expected));
    }

    ClaimResult operator()(const MomentClaim& c) const {
        ClaimResult r;
        r.label = c.label;
        r.method = "monte-carlo";
        r.expected = c.expected;
        const SampleStats s = column_stats(eval_column(c.expr, sources, source_cols));
        r.computed = s.mean;
        r.std_error = s.std_error(n);
        r.passed = within_5se(r.computed, r.expected, r.std_error);
        return r;
    }

    ClaimResult operator()(const FiniteMomentClaim& c) const {
        return ExactVerifier{sources}(c);
    }

    ClaimResult operator()(const CovarianceClaim& c) const {
        ClaimResult r;
        r.label = c.label;
        r.method = "monte-carlo";
        r.expected = c.expected;
        const std::vector<double> a = eval_column(c.a, sources, source_cols);
        const std::vector<double> b = eval_column(c.b, sources, source_cols);
        const SampleStats sa = column_stats(a);
        const SampleStats sb = column_stats(b);
        std::vector<double> d(n);
        for (std::size_t i = 0; i < n; ++i) d[i] = (a[i] - sa.mean) * (b[i] - sb.mean);
        const SampleStats sd = column_stats(d);
        r.computed = sd.mean;
        r.std_error = sd.std_error(n);
        r.passed = within_5se(r.computed, r.expected, r.std_error);
        return r;
    }

    ClaimResult operator()(const ConditionalFormClaim& c) const {
        return ExactVerifier{sources}(c);
    }

    ClaimResult operator()(const ProjectionClaim& c) const {
        ClaimResult r;
        r.label = c.label;
        r.method = "monte-carlo";
        const std::size_t k = c.regressors.size();
        SampleMatrix m;
        m.n = n;
        m.columns.push_back(eval_column(c.y, sources, source_cols));
        for (const PolyRandomVariable& xj : c.regressors) {
            m.columns.push_back(eval_column(xj, sources, source_cols));
        }
        const Vector beta = ols(m);

        // Heteroskedasticity-robust (sandwich) standard errors.
        Matrix gram(k, k);
        for (std::size_t i = 0; i < k; ++i) {
            for (std::size_t j = i; j < k; ++j) {
                double s = 0.0;
                for (std::size_t row = 0; row < n; ++row) {
                    s += m.columns[i + 1][row] * m.columns[j + 1][row];
                }
                gram(i, j) = gram(j, i) = s / static_cast<double>(n);
            }
        }
        std::vector<double> resid(n);
        for (std::size_t row = 0; row < n; ++row) {
            double fit = 0.0;
            for (std::size_t j = 0; j < k; ++j) fit += m.columns[j + 1][row] * beta[j];
            resid[row] = m.columns[0][row] - fit;
        }
        Matrix meat(k, k);
        for (std::size_t i = 0; i < k; ++i) {
            for (std::size_t j = i; j < k; ++j) {
                double s = 0.0;
                for (std::size_t row = 0; row < n; ++row) {
                    s += resid[row] * resid[row] * m.columns[i + 1][row] * m.columns[j + 1][row];
                }
                meat(i, j) = meat(j, i) = s / static_cast<double>(n);
            }
        }
        Matrix gram_inv(k, k);
        for (std::size_t j = 0; j < k; ++j) {
            Vector e(k, 0.0);
            e[j] = 1.0;
            const Vector col = spd_solve(gram, e);
            for (std::size_t i = 0; i < k; ++i) gram_inv(i, j) = col[i];
        }
        const Matrix cov = matmul(matmul(gram_inv, meat), gram_inv);

        r.passed = true;
        double worst_se = 0.0;
        for (std::size_t j = 0; j < k; ++j) {
            const double se = std::sqrt(cov(j, j) / static_cast<double>(n));
            worst_se = std::max(worst_se, se);
            if (!within_5se(beta[j], c.expected[j], se)) r.passed = false;
        }
        r.computed = k == 1 ? beta[0] : sup_distance(beta, c.expected);
        r.expected = k == 1 ? c.expected[0] : 0.0;
        r.std_error = worst_se;
        return r;
    }
};

}  // namespace detail

inline VerificationReport verify_exact(const CounterexampleCase& c) {
    VerificationReport rep;
    rep.case_name = c.name;
    rep.mode = "exact";
    const detail::ExactVerifier v{c.sources};
    for (const Claim& claim : c.claims) rep.results.push_back(std::visit(v, claim));
    return rep;
}

inline VerificationReport verify_monte_carlo(const CounterexampleCase& c, std::size_t n,
                                             std::uint64_t seed) {
    VerificationReport rep;
    rep.case_name = c.name;
    rep.mode = "monte-carlo(n=" + std::to_string(n) + ", seed=" + std::to_string(seed) + ")";
    const auto source_cols = sample_sources(c.sources, n, seed);
    const detail::MonteCarloVerifier v{c.sources, source_cols, n};
    for (const Claim& claim : c.claims) rep.results.push_back(std::visit(v, claim));
    return rep;
}

}  // namespace slr
