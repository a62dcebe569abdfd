#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "slr/counterexamples.hpp"
#include "slr/regression_model.hpp"
#include "slr/simulation.hpp"
#include "support/oracles.hpp"

using namespace slr;

namespace {

PolyRandomVariable var(const std::string& name) { return PolyRandomVariable::source(name); }

RandomVectorSpec two_regressor_member(double b1 = 2.0, double b2 = 3.0) {
    SourceList sources{SourceDistribution::gaussian("x1", 1.0),
                       SourceDistribution::gaussian("x2", 1.0),
                       SourceDistribution::gaussian("x3", 1.0)};
    return make_family_member(sources, {var("x1"), var("x2")}, {b1, b2}, var("x3"));
}

// Quadratic least-squares fit of bin means over bin centers, with its own
// tiny normal-equations solve; returns the coefficient of determination.
double quadratic_fit_r2(const std::vector<BinStat>& bins) {
    std::vector<std::vector<double>> ata(3, std::vector<double>(3, 0.0));
    std::vector<double> atb(3, 0.0);
    std::vector<double> means;
    for (const BinStat& b : bins) {
        if (b.count == 0) continue;
        const double row[3] = {1.0, b.center, b.center * b.center};
        for (int i = 0; i < 3; ++i) {
            for (int j = 0; j < 3; ++j) ata[i][j] += row[i] * row[j];
            atb[i] += row[i] * b.mean;
        }
        means.push_back(b.mean);
    }
    const std::vector<double> coef = slr::testing::solve_dense(ata, atb);
    std::vector<double> pred;
    for (const BinStat& b : bins) {
        if (b.count == 0) continue;
        pred.push_back(coef[0] + coef[1] * b.center + coef[2] * b.center * b.center);
    }
    return r_squared(means, pred);
}

}  // namespace

TEST_CASE("sampling basics") {
    SECTION("a degenerate source yields a constant column") {
        RandomVectorSpec spec;
        spec.sources = {SourceDistribution::dirac("one", 1.0)};
        spec.x = {var("one")};
        spec.y = var("one");
        const SampleMatrix m = sample(spec, 1000, 5);
        for (double v : m.columns[1]) CHECK(v == 1.0);
    }
    SECTION("rademacher mean obeys the CLT envelope") {
        RandomVectorSpec spec;
        spec.sources = {SourceDistribution::rademacher("r")};
        spec.x = {var("r")};
        spec.y = var("r");
        const std::size_t n = 1'000'000;
        const SampleMatrix m = sample(spec, n, 11);
        double mean = 0.0;
        for (double v : m.columns[1]) mean += v;
        mean /= static_cast<double>(n);
        CHECK(std::abs(mean) <= 5.0 / std::sqrt(static_cast<double>(n)));
    }
    SECTION("gaussian second moment obeys the CLT envelope") {
        RandomVectorSpec spec;
        spec.sources = {SourceDistribution::gaussian("g", 1.0)};
        spec.x = {var("g")};
        spec.y = var("g");
        const std::size_t n = 1'000'000;
        const SampleMatrix m = sample(spec, n, 12);
        double second = 0.0;
        for (double v : m.columns[1]) second += v * v;
        second /= static_cast<double>(n);
        CHECK(std::abs(second - 1.0) <=
              5.0 * std::sqrt(2.0) / std::sqrt(static_cast<double>(n)));
    }
    SECTION("finite discrete atom frequencies match their probabilities") {
        RandomVectorSpec spec;
        spec.sources = {SourceDistribution::finite_discrete(
            "d", {{-1.0, 0.2}, {0.0, 0.3}, {2.0, 0.5}})};
        spec.x = {var("d")};
        spec.y = var("d");
        const std::size_t n = 1'000'000;
        const SampleMatrix m = sample(spec, n, 13);
        std::size_t hits[3] = {0, 0, 0};
        for (double v : m.columns[1]) {
            if (v == -1.0) ++hits[0];
            else if (v == 0.0) ++hits[1];
            else ++hits[2];
        }
        const double probs[3] = {0.2, 0.3, 0.5};
        for (int i = 0; i < 3; ++i) {
            const double se = std::sqrt(probs[i] * (1 - probs[i]) / static_cast<double>(n));
            CHECK(std::abs(static_cast<double>(hits[i]) / static_cast<double>(n) - probs[i]) <=
                  5.0 * se);
        }
    }
}

TEST_CASE("sampling is deterministic bit for bit") {
    const RandomVectorSpec spec = two_regressor_member();
    const SampleMatrix a = sample(spec, 10'000, 99);
    const SampleMatrix b = sample(spec, 10'000, 99);
    CHECK(a.columns == b.columns);
    CHECK(ols(a) == ols(b));
    const SampleMatrix c = sample(spec, 10'000, 100);
    CHECK(a.columns != c.columns);
}

TEST_CASE("ols") {
    SECTION("noiseless data is interpolated exactly") {
        SourceList sources{SourceDistribution::gaussian("x1", 1.0),
                           SourceDistribution::gaussian("x2", 1.0)};
        RandomVectorSpec spec;
        spec.sources = sources;
        spec.x = {var("x1"), var("x2")};
        spec.y = 2.0 * var("x1") + 3.0 * var("x2");
        const Vector beta = ols(sample(spec, 500, 21));
        CHECK(beta[0] == Catch::Approx(2.0).margin(1e-9));
        CHECK(beta[1] == Catch::Approx(3.0).margin(1e-9));
    }
    SECTION("estimates approach the member's coefficient") {
        const RandomVectorSpec spec = two_regressor_member();
        const Vector beta = ols(sample(spec, 100'000, 7));
        CHECK(std::abs(beta[0] - 2.0) <= 0.05);
        CHECK(std::abs(beta[1] - 3.0) <= 0.05);
    }
    SECTION("collinear columns raise the singular-Gram error") {
        SourceList sources{SourceDistribution::gaussian("x1", 1.0)};
        RandomVectorSpec spec;
        spec.sources = sources;
        spec.x = {var("x1"), 2.0 * var("x1")};
        spec.y = var("x1");
        CHECK_THROWS_AS(ols(sample(spec, 10, 3)), NotLinearlyIndependentError);
    }
    SECTION("n = k with degenerate rows raises the singular-Gram error") {
        SourceList sources{SourceDistribution::dirac("a", 1.0),
                           SourceDistribution::dirac("b", 2.0)};
        RandomVectorSpec spec;
        spec.sources = sources;
        spec.x = {var("a"), var("b")};
        spec.y = var("a");
        CHECK_THROWS_AS(ols(sample(spec, 2, 3)), NotLinearlyIndependentError);
    }
}

TEST_CASE("the estimator and the population formula share one solver") {
    // Feeding the exact Gram and cross moments to the solver reproduces
    // projection_coefficient bit for bit.
    const RandomVectorSpec spec = two_regressor_member(1.25, -0.75);
    const Matrix gram = gram_matrix(spec.x, spec.sources);
    const Vector cross = cross_moments(spec.y, spec.x, spec.sources);
    const Vector via_solver = spd_solve(gram, cross);
    const Vector direct = projection_coefficient(spec.y, spec.x, spec.sources);
    CHECK(via_solver == direct);
}

TEST_CASE("sample moments converge to the exact engine's values") {
    const RandomVectorSpec spec = two_regressor_member();
    const std::size_t n = 1'000'000;
    const SampleMatrix m = sample(spec, n, 31);
    const Matrix gram = gram_matrix(spec.x, spec.sources);
    const Vector cross = cross_moments(spec.y, spec.x, spec.sources);

    for (std::size_t i = 0; i < 2; ++i) {
        for (std::size_t j = 0; j < 2; ++j) {
            std::vector<double> prod(n);
            for (std::size_t r = 0; r < n; ++r) {
                prod[r] = m.columns[i + 1][r] * m.columns[j + 1][r];
            }
            double mean = 0.0;
            for (double v : prod) mean += v;
            mean /= static_cast<double>(n);
            double ss = 0.0;
            for (double v : prod) ss += (v - mean) * (v - mean);
            const double se = std::sqrt(ss / static_cast<double>(n)) /
                              std::sqrt(static_cast<double>(n));
            CHECK(std::abs(mean - gram(i, j)) <= 5.0 * se + 1e-12);
        }
        std::vector<double> prod(n);
        for (std::size_t r = 0; r < n; ++r) prod[r] = m.columns[i + 1][r] * m.columns[0][r];
        double mean = 0.0;
        for (double v : prod) mean += v;
        mean /= static_cast<double>(n);
        double ss = 0.0;
        for (double v : prod) ss += (v - mean) * (v - mean);
        const double se =
            std::sqrt(ss / static_cast<double>(n)) / std::sqrt(static_cast<double>(n));
        CHECK(std::abs(mean - cross[i]) <= 5.0 * se + 1e-12);
    }
}

TEST_CASE("consistency experiment") {
    SECTION("two-regressor member with seed 7") {
        const RandomVectorSpec spec = two_regressor_member();
        const ConsistencyReport rep =
            consistency_experiment(spec, default_schedule(), 7);
        REQUIRE(rep.rows.size() == 4);
        CHECK(rep.beta[0] == Catch::Approx(2.0).margin(1e-12));
        CHECK(rep.beta[1] == Catch::Approx(3.0).margin(1e-12));
        CHECK(rep.decreasing_steps >= 2);
        CHECK(rep.rows[2].sup_error <= 0.05);  // n = 1e5
        CHECK(rep.final_error <= 0.02);        // n = 1e6
        for (const ConsistencyRow& row : rep.rows) CHECK(row.clt_scale > 0.0);
    }
    SECTION("beta = 0 member converges to zero") {
        const RandomVectorSpec spec = two_regressor_member(0.0, 0.0);
        const ConsistencyReport rep = consistency_experiment(spec, {1000, 100000}, 7);
        CHECK(rep.beta == Vector{0.0, 0.0});
        CHECK(rep.final_error <= 0.05);
    }
    SECTION("quadratic link converges to 1 although E(Y|X) is not affine") {
        RandomVectorSpec spec;
        spec.sources = {SourceDistribution::gaussian("X", 1.0)};
        spec.x = {var("X")};
        spec.y = var("X") + var("X") * var("X");
        const ConsistencyReport rep = consistency_experiment(spec, default_schedule(), 7);
        CHECK(rep.beta[0] == Catch::Approx(1.0).margin(1e-12));
        CHECK(rep.final_error <= 0.02);
    }
    SECTION("non-members are refused") {
        RandomVectorSpec spec;
        spec.sources = {SourceDistribution::gaussian("x1", 1.0),
                        SourceDistribution::gaussian("x2", 1.0)};
        spec.x = {var("x1"), var("x1") + var("x2")};
        spec.y = var("x2");
        CHECK_THROWS_AS(consistency_experiment(spec, {100}, 7), MembershipError);
    }
}

TEST_CASE("empirical conditional mean") {
    SECTION("eps = X^2 bins to a quadratic with R^2 >= 0.99") {
        RandomVectorSpec spec;
        spec.sources = {SourceDistribution::gaussian("X", 1.0)};
        spec.x = {var("X")};
        spec.y = var("X") * var("X");
        const SampleMatrix m = sample(spec, 1'000'000, 17);
        const auto bins = empirical_conditional_mean(m.columns[1], m.columns[0], 20);
        CHECK(quadratic_fit_r2(bins) >= 0.99);
    }
    SECTION("independent noise stays flat within 5 standard errors per bin") {
        RandomVectorSpec spec;
        spec.sources = {SourceDistribution::gaussian("X", 1.0),
                        SourceDistribution::gaussian("Z", 1.0)};
        spec.x = {var("X")};
        spec.y = var("Z") + PolyRandomVariable::constant(0.5);  // E = 0.5, sd = 1
        const std::size_t n = 200'000;
        const SampleMatrix m = sample(spec, n, 18);
        const auto bins = empirical_conditional_mean(m.columns[1], m.columns[0], 15);
        for (const BinStat& b : bins) {
            if (b.count < 30) continue;
            const double se = 1.0 / std::sqrt(static_cast<double>(b.count));
            CHECK(std::abs(b.mean - 0.5) <= 5.0 * se);
        }
    }
    SECTION("product-space case tracks x^2") {
        const auto c = rademacher_gaussian_product();
        RandomVectorSpec spec;
        spec.sources = c.sources;
        spec.x = {c.variables.at("X")};
        spec.y = c.variables.at("eps");
        const SampleMatrix m = sample(spec, 500'000, 19);
        const auto bins = empirical_conditional_mean(m.columns[1], m.columns[0], 20);
        std::vector<double> means;
        std::vector<double> predicted;
        for (const BinStat& b : bins) {
            if (b.count < 30) continue;
            means.push_back(b.mean);
            predicted.push_back(b.center * b.center);
        }
        CHECK(r_squared(means, predicted) >= 0.99);
    }
    SECTION("error paths") {
        const std::vector<double> x{1.0, 2.0, 3.0};
        const std::vector<double> e{1.0, 2.0};
        CHECK_THROWS_AS(empirical_conditional_mean(x, e, 4), std::invalid_argument);
        const std::vector<double> e3{1.0, 2.0, 3.0};
        CHECK_THROWS_AS(empirical_conditional_mean(x, e3, 1), std::invalid_argument);
        const std::vector<double> flat(100, 2.5);
        CHECK_THROWS_AS(empirical_conditional_mean(flat, flat, 4), std::invalid_argument);
    }
}
