#pragma once

// Seeded generators for randomized designs used by property tests and the
// acceptance suite: mixed Gaussian / finite-discrete source lists and
// polynomial regressor sets with a comfortably positive-definite Gram
// matrix.

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "slr/linalg.hpp"
#include "slr/polynomial.hpp"
#include "slr/projection.hpp"
#include "slr/source_distribution.hpp"

namespace slr::testing {

inline SourceList random_sources(std::mt19937_64& rng, std::size_t count) {
    std::uniform_real_distribution<double> variance(0.4, 2.0);
    std::uniform_real_distribution<double> value(-2.0, 2.0);
    std::uniform_real_distribution<double> raw_prob(0.2, 1.0);
    std::uniform_int_distribution<int> kind(0, 1);
    std::uniform_int_distribution<std::size_t> atom_count(2, 4);

    SourceList sources;
    for (std::size_t s = 0; s < count; ++s) {
        const std::string name = "s" + std::to_string(s + 1);
        if (kind(rng) == 0) {
            sources.add(SourceDistribution::gaussian(name, variance(rng)));
        } else {
            const std::size_t atoms = atom_count(rng);
            std::vector<DiscretePoint> points;
            double total = 0.0;
            for (std::size_t a = 0; a < atoms; ++a) {
                double v = value(rng);
                // Distinct atom values; nudge collisions apart.
                for (const DiscretePoint& p : points) {
                    if (p.value == v) v += 0.1;
                }
                points.push_back({v, raw_prob(rng)});
                total += points.back().prob;
            }
            for (DiscretePoint& p : points) p.prob /= total;
            // Absorb normalization rounding into the last atom.
            double sum = 0.0;
            for (std::size_t a = 0; a + 1 < points.size(); ++a) sum += points[a].prob;
            points.back().prob = 1.0 - sum;
            sources.add(SourceDistribution::finite_discrete(name, points));
        }
    }
    return sources;
}

inline PolyRandomVariable random_polynomial(std::mt19937_64& rng, const SourceList& sources,
                                            unsigned max_degree, std::size_t max_terms,
                                            double coeff_range = 2.0) {
    std::uniform_real_distribution<double> coeff(-coeff_range, coeff_range);
    std::uniform_int_distribution<std::size_t> term_count(1, max_terms);
    std::uniform_int_distribution<unsigned> degree(0, max_degree);
    std::uniform_int_distribution<std::size_t> pick(0, sources.size() - 1);

    PolyRandomVariable p;
    const std::size_t terms = term_count(rng);
    for (std::size_t t = 0; t < terms; ++t) {
        Monomial m;
        const unsigned d = degree(rng);
        for (unsigned i = 0; i < d; ++i) ++m[sources[pick(rng)].name()];
        p += PolyRandomVariable::monomial(coeff(rng), std::move(m));
    }
    return p;
}

struct RandomDesign {
    SourceList sources;
    std::vector<PolyRandomVariable> x;
    PolyRandomVariable y;
};

// Draws until the regressor Gram matrix is positive definite with a sane
// smallest pivot, so that both projection routes are well conditioned.
inline RandomDesign random_design(std::mt19937_64& rng, std::size_t max_k = 6,
                                  std::size_t max_sources = 4) {
    std::uniform_int_distribution<std::size_t> k_dist(1, max_k);
    std::uniform_int_distribution<std::size_t> source_count(1, max_sources);

    for (int attempt = 0; attempt < 200; ++attempt) {
        RandomDesign d;
        d.sources = random_sources(rng, source_count(rng));
        const std::size_t k = k_dist(rng);
        for (std::size_t j = 0; j < k; ++j) {
            d.x.push_back(random_polynomial(rng, d.sources, 3, 3));
        }
        d.y = random_polynomial(rng, d.sources, 3, 4);
        try {
            const Matrix gram = gram_matrix(d.x, d.sources);
            const Matrix l = cholesky_factor(gram);
            double min_pivot = l(0, 0);
            double max_pivot = l(0, 0);
            for (std::size_t j = 0; j < k; ++j) {
                min_pivot = std::min(min_pivot, l(j, j));
                max_pivot = std::max(max_pivot, l(j, j));
            }
            if (min_pivot > 1e-3 * max_pivot) return d;
        } catch (const NotLinearlyIndependentError&) {
            continue;
        }
    }
    throw std::runtime_error("could not draw a well-conditioned random design");
}

}  // namespace slr::testing
