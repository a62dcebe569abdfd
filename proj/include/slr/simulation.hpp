#pragma once

// Seeded sampling, ordinary least squares, and empirical checks.
//
// sample() draws i.i.d. source tuples row by row with the counter-based
// generator and evaluates each polynomial per row, so identical
// (spec, n, seed) reproduces identical bits. All reductions run in a
// fixed sequential order. ols() solves the sample normal equations with
// the same positive-definite solver the population projection uses.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "slr/errors.hpp"
#include "slr/linalg.hpp"
#include "slr/moments.hpp"
#include "slr/polynomial.hpp"
#include "slr/projection.hpp"
#include "slr/regression_model.hpp"
#include "slr/rng.hpp"
#include "slr/source_distribution.hpp"

namespace slr {

// Polynomial flattened to source indices for fast per-row evaluation.
class CompiledPoly {
public:
    CompiledPoly(const PolyRandomVariable& p, const SourceList& sources) {
        for (const auto& [m, c] : p.terms()) {
            Term t;
            t.coeff = c;
            for (const auto& [sym, e] : m) {
                t.factors.push_back({sources.index_of(sym), e});
            }
            terms_.push_back(std::move(t));
        }
    }

    double eval(std::span<const double> source_values) const {
        double total = 0.0;
        for (const Term& t : terms_) {
            double v = t.coeff;
            for (const auto& [idx, e] : t.factors) {
                double b = source_values[idx];
                for (unsigned i = 1; i < e; ++i) b *= source_values[idx];
                v *= b;
            }
            total += v;
        }
        return total;
    }

private:
    struct Term {
        double coeff = 0.0;
        std::vector<std::pair<std::size_t, unsigned>> factors;
    };
    std::vector<Term> terms_;
};

// One column per source, n rows each, deterministic in (sources, n, seed).
inline std::vector<std::vector<double>> sample_sources(const SourceList& sources,
                                                       std::size_t n, std::uint64_t seed) {
    std::vector<std::vector<double>> cols(sources.size(), std::vector<double>(n));
    for (std::size_t row = 0; row < n; ++row) {
        for (std::size_t s = 0; s < sources.size(); ++s) {
            cols[s][row] = draw_source(sources[s], seed, row, s);
        }
    }
    return cols;
}

struct SampleMatrix {
    std::size_t n = 0;
    std::uint64_t seed = 0;
    std::vector<std::string> names;            // "Y", "X1", ...
    std::vector<std::vector<double>> columns;  // Y first, then X_1..X_k
};

inline SampleMatrix sample(const RandomVectorSpec& spec, std::size_t n, std::uint64_t seed) {
    if (n < 1) throw std::invalid_argument("sample size must be at least 1");
    SampleMatrix m;
    m.n = n;
    m.seed = seed;
    m.names.push_back("Y");
    for (std::size_t j = 0; j < spec.k(); ++j) m.names.push_back("X" + std::to_string(j + 1));

    std::vector<CompiledPoly> polys;
    polys.emplace_back(spec.y, spec.sources);
    for (const PolyRandomVariable& xj : spec.x) polys.emplace_back(xj, spec.sources);

    m.columns.assign(polys.size(), std::vector<double>(n));
    std::vector<double> row_values(spec.sources.size());
    for (std::size_t row = 0; row < n; ++row) {
        for (std::size_t s = 0; s < spec.sources.size(); ++s) {
            row_values[s] = draw_source(spec.sources[s], seed, row, s);
        }
        for (std::size_t c = 0; c < polys.size(); ++c) {
            m.columns[c][row] = polys[c].eval(row_values);
        }
    }
    return m;
}

// beta_hat = (sum_i x_i x_i^T)^{-1} sum_i x_i y_i.
inline Vector ols(const SampleMatrix& data) {
    const std::size_t k = data.columns.size() - 1;
    const double n = static_cast<double>(data.n);
    Matrix gram(k, k);
    Vector cross(k, 0.0);
    for (std::size_t i = 0; i < k; ++i) {
        const std::vector<double>& xi = data.columns[i + 1];
        for (std::size_t j = i; j < k; ++j) {
            const std::vector<double>& xj = data.columns[j + 1];
            double s = 0.0;
            for (std::size_t row = 0; row < data.n; ++row) s += xi[row] * xj[row];
            gram(i, j) = gram(j, i) = s / n;
        }
        double s = 0.0;
        for (std::size_t row = 0; row < data.n; ++row) s += xi[row] * data.columns[0][row];
        cross[i] = s / n;
    }
    return spd_solve(gram, cross);
}

struct ConsistencyRow {
    std::size_t n = 0;
    Vector beta_hat;
    double sup_error = 0.0;  // ||beta_hat - beta||_inf
    double clt_scale = 0.0;  // max_j sqrt((G^-1 E[eps^2 X X^T] G^-1)_jj / n)
};

struct ConsistencyReport {
    Vector beta;  // population projection coefficient
    std::vector<ConsistencyRow> rows;
    std::size_t decreasing_steps = 0;
    std::size_t total_steps = 0;
    double final_error = 0.0;
};

inline std::vector<std::size_t> default_schedule() {
    return {1000, 10000, 100000, 1000000};
}

// OLS at each n in the schedule against the exact projection coefficient.
// The CLT scale column reports the exact asymptotic standard error
// predicted by the moment engine, for reading the errors against.
inline ConsistencyReport consistency_experiment(const RandomVectorSpec& spec,
                                                const std::vector<std::size_t>& schedule,
                                                std::uint64_t seed) {
    ConsistencyReport rep;
    rep.beta = classify(spec);
    const ProjectionResult proj = decompose(spec.y, spec.x, spec.sources);
    const std::size_t k = spec.k();

    // Sandwich covariance E[eps^2 X X^T], exactly.
    const PolyRandomVariable eps2 = proj.canonical_error * proj.canonical_error;
    Matrix meat(k, k);
    for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = i; j < k; ++j) {
            meat(i, j) = meat(j, i) = expectation(eps2 * spec.x[i] * spec.x[j], spec.sources);
        }
    }
    Matrix gram_inv(k, k);
    for (std::size_t j = 0; j < k; ++j) {
        Vector e(k, 0.0);
        e[j] = 1.0;
        const Vector col = spd_solve(proj.gram, e);
        for (std::size_t i = 0; i < k; ++i) gram_inv(i, j) = col[i];
    }
    const Matrix sandwich = matmul(matmul(gram_inv, meat), gram_inv);

    for (const std::size_t n : schedule) {
        ConsistencyRow row;
        row.n = n;
        row.beta_hat = ols(sample(spec, n, seed));
        row.sup_error = sup_distance(row.beta_hat, rep.beta);
        double worst = 0.0;
        for (std::size_t j = 0; j < k; ++j) {
            worst = std::max(worst, sandwich(j, j) / static_cast<double>(n));
        }
        row.clt_scale = std::sqrt(worst);
        rep.rows.push_back(std::move(row));
    }
    rep.total_steps = rep.rows.empty() ? 0 : rep.rows.size() - 1;
    for (std::size_t i = 1; i < rep.rows.size(); ++i) {
        if (rep.rows[i].sup_error < rep.rows[i - 1].sup_error) ++rep.decreasing_steps;
    }
    rep.final_error = rep.rows.empty() ? 0.0 : rep.rows.back().sup_error;
    return rep;
}

struct BinStat {
    double center = 0.0;
    double mean = 0.0;
    std::size_t count = 0;
    bool low_count = false;  // fewer than 30 samples
};

// Per-bin means of e over equal-width bins covering the central 99% range
// of x.
inline std::vector<BinStat> empirical_conditional_mean(std::span<const double> x,
                                                       std::span<const double> e,
                                                       std::size_t bins) {
    if (x.size() != e.size()) throw std::invalid_argument("x and e must have equal length");
    if (bins < 2) throw std::invalid_argument("need at least 2 bins");
    if (x.empty()) throw std::invalid_argument("empty sample");

    std::vector<double> sorted(x.begin(), x.end());
    std::sort(sorted.begin(), sorted.end());
    const auto quantile = [&sorted](double q) {
        const double pos = q * static_cast<double>(sorted.size() - 1);
        const std::size_t lo = static_cast<std::size_t>(pos);
        const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
        const double frac = pos - static_cast<double>(lo);
        return sorted[lo] * (1.0 - frac) + sorted[hi] * frac;
    };
    const double lo = quantile(0.005);
    const double hi = quantile(0.995);
    if (!(hi > lo)) throw std::invalid_argument("degenerate x range");
    const double width = (hi - lo) / static_cast<double>(bins);

    std::vector<double> sums(bins, 0.0);
    std::vector<std::size_t> counts(bins, 0);
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (x[i] < lo || x[i] > hi) continue;
        std::size_t b = static_cast<std::size_t>((x[i] - lo) / width);
        b = std::min(b, bins - 1);
        sums[b] += e[i];
        ++counts[b];
    }

    std::vector<BinStat> out;
    out.reserve(bins);
    for (std::size_t b = 0; b < bins; ++b) {
        BinStat s;
        s.center = lo + (static_cast<double>(b) + 0.5) * width;
        s.count = counts[b];
        s.mean = counts[b] ? sums[b] / static_cast<double>(counts[b]) : 0.0;
        s.low_count = counts[b] < 30;
        out.push_back(s);
    }
    return out;
}

// Coefficient of determination of predictions against observations.
inline double r_squared(std::span<const double> observed, std::span<const double> predicted) {
    if (observed.size() != predicted.size() || observed.empty()) {
        throw std::invalid_argument("observed and predicted must have equal, nonzero length");
    }
    double mean = 0.0;
    for (double v : observed) mean += v;
    mean /= static_cast<double>(observed.size());
    double ss_res = 0.0;
    double ss_tot = 0.0;
    for (std::size_t i = 0; i < observed.size(); ++i) {
        ss_res += (observed[i] - predicted[i]) * (observed[i] - predicted[i]);
        ss_tot += (observed[i] - mean) * (observed[i] - mean);
    }
    if (ss_tot == 0.0) return ss_res == 0.0 ? 1.0 : 0.0;
    return 1.0 - ss_res / ss_tot;
}

}  // namespace slr
