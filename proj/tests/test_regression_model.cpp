#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <map>
#include <random>
#include <vector>

#include "slr/regression_model.hpp"
#include "support/random_designs.hpp"

using namespace slr;

namespace {

PolyRandomVariable var(const std::string& name) { return PolyRandomVariable::source(name); }

SourceList three_unit_gaussians() {
    return {SourceDistribution::gaussian("x1", 1.0), SourceDistribution::gaussian("x2", 1.0),
            SourceDistribution::gaussian("x3", 1.0)};
}

}  // namespace

TEST_CASE("validate_fundamental") {
    SECTION("independent sources form a fundamental vector") {
        RandomVectorSpec spec;
        spec.sources = three_unit_gaussians();
        spec.x = {var("x1"), var("x2")};
        spec.y = var("x1") + var("x3");
        const ModelDiagnosis d = validate_fundamental(spec);
        CHECK(d.l2_finite);
        CHECK(d.nondegenerate == std::vector<bool>{true, true});
        CHECK(d.orthogonal_set.size() == 1);
        CHECK(d.orthogonal_set[0].orthogonal);
        CHECK(d.gram_pd);
        CHECK(d.is_fundamental);
        CHECK(d.is_member);
    }
    SECTION("correlated regressors are rejected with the cross moment") {
        RandomVectorSpec spec;
        spec.sources = three_unit_gaussians();
        spec.x = {var("x1"), var("x1") + var("x2")};
        spec.y = var("x3");
        const ModelDiagnosis d = validate_fundamental(spec);
        CHECK_FALSE(d.orthogonal_set[0].orthogonal);
        CHECK(d.orthogonal_set[0].value == Catch::Approx(1.0).margin(1e-12));
        CHECK_FALSE(d.is_fundamental);
        CHECK_FALSE(d.is_member);
    }
    SECTION("the zero regressor is degenerate") {
        RandomVectorSpec spec;
        spec.sources = three_unit_gaussians();
        spec.x = {var("x1"), PolyRandomVariable{}};
        spec.y = var("x2");
        const ModelDiagnosis d = validate_fundamental(spec);
        CHECK(d.nondegenerate[0]);
        CHECK_FALSE(d.nondegenerate[1]);
        CHECK_FALSE(d.is_fundamental);
        CHECK_FALSE(d.gram_pd);
    }
    SECTION("orthogonal but dependent components still qualify") {
        // x1 and x1^2 - 1 are orthogonal under a unit gaussian though one
        // determines the other.
        RandomVectorSpec spec;
        spec.sources = {SourceDistribution::gaussian("x1", 1.0)};
        spec.x = {var("x1"), var("x1") * var("x1") - PolyRandomVariable::constant(1.0)};
        spec.y = var("x1");
        const ModelDiagnosis d = validate_fundamental(spec);
        CHECK(d.is_fundamental);
    }
}

TEST_CASE("is_stochastic_linear_regression mirrors validation") {
    RandomVectorSpec fundamental;
    fundamental.sources = three_unit_gaussians();
    fundamental.x = {var("x1"), var("x2")};
    fundamental.y = var("x1") * var("x2");
    CHECK(is_stochastic_linear_regression(fundamental));

    RandomVectorSpec correlated = fundamental;
    correlated.x = {var("x1"), var("x1") + var("x2")};
    CHECK_FALSE(is_stochastic_linear_regression(correlated));

    RandomVectorSpec degenerate;
    degenerate.sources = {SourceDistribution::dirac("z", 0.0)};
    degenerate.x = {var("z")};
    degenerate.y = PolyRandomVariable::constant(1.0);
    CHECK_FALSE(is_stochastic_linear_regression(degenerate));
}

TEST_CASE("make_family_member") {
    const SourceList sources = three_unit_gaussians();
    const std::vector<PolyRandomVariable> x{var("x1"), var("x2")};

    SECTION("linear-additive member") {
        const RandomVectorSpec spec = make_family_member(sources, x, {2.0, 3.0}, var("x3"));
        const PolyRandomVariable expected = 2.0 * var("x1") + 3.0 * var("x2") + var("x3");
        CHECK((spec.y - expected).pruned(1e-12).is_zero());
        const Vector beta = classify(spec);
        CHECK(beta[0] == Catch::Approx(2.0).margin(1e-12));
        CHECK(beta[1] == Catch::Approx(3.0).margin(1e-12));
    }
    SECTION("beta = 0 gives Y = eta") {
        const RandomVectorSpec spec = make_family_member(sources, x, {0.0, 0.0}, var("x3"));
        CHECK(spec.y == var("x3"));
    }
    SECTION("eta correlated with a regressor is rejected per pair") {
        try {
            (void)make_family_member(sources, x, {1.0, 1.0}, var("x1"));
            FAIL("expected PreconditionError");
        } catch (const PreconditionError& e) {
            CHECK(std::string(e.what()).find("eta and X_1") != std::string::npos);
        }
    }
    SECTION("degenerate regressor is rejected") {
        CHECK_THROWS_AS(
            make_family_member(sources, {var("x1"), PolyRandomVariable{}}, {1.0, 1.0},
                               var("x3")),
            PreconditionError);
    }
    SECTION("beta length must match") {
        CHECK_THROWS_AS(make_family_member(sources, x, {1.0}, var("x3")), PreconditionError);
    }
    SECTION("orthogonal but dependent eta is allowed") {
        // eta = x1^2 - 1 is orthogonal to x1 and x2; independence is not
        // required.
        const PolyRandomVariable eta =
            var("x1") * var("x1") - PolyRandomVariable::constant(1.0);
        const RandomVectorSpec spec = make_family_member(sources, x, {1.0, -1.0}, eta);
        CHECK(is_stochastic_linear_regression(spec));
        const Vector beta = classify(spec);
        CHECK(beta[0] == Catch::Approx(1.0).margin(1e-12));
        CHECK(beta[1] == Catch::Approx(-1.0).margin(1e-12));
    }
}

TEST_CASE("classify") {
    const SourceList sources = three_unit_gaussians();

    SECTION("Y orthogonal to all regressors classifies to zero") {
        RandomVectorSpec spec;
        spec.sources = sources;
        spec.x = {var("x1"), var("x2")};
        spec.y = var("x3");
        const Vector beta = classify(spec);
        CHECK(beta[0] == 0.0);
        CHECK(beta[1] == 0.0);
    }
    SECTION("quadratic link classifies to 1") {
        RandomVectorSpec spec;
        spec.sources = {SourceDistribution::gaussian("X", 1.0)};
        spec.x = {var("X")};
        spec.y = var("X") + var("X") * var("X");
        const Vector beta = classify(spec);
        CHECK(beta[0] == Catch::Approx(1.0).margin(1e-12));
    }
    SECTION("non-members are refused") {
        RandomVectorSpec spec;
        spec.sources = sources;
        spec.x = {var("x1"), var("x1") + var("x2")};
        spec.y = var("x3");
        CHECK_THROWS_AS(classify(spec), MembershipError);
    }
}

TEST_CASE("check_injectivity") {
    const SourceList sources = three_unit_gaussians();
    const std::vector<PolyRandomVariable> x{var("x1"), var("x2")};
    const PolyRandomVariable eta = var("x3");

    SECTION("three distinct coefficients are recovered") {
        const InjectivityReport rep = check_injectivity(
            sources, x, eta, {Vector{0.0, 0.0}, Vector{1.0, 0.0}, Vector{0.0, 1.0}});
        CHECK(rep.injective);
        CHECK(rep.max_recovery_error <= 1e-9);
    }
    SECTION("a singleton is trivially injective") {
        const InjectivityReport rep = check_injectivity(sources, x, eta, {Vector{2.0, -1.0}});
        CHECK(rep.injective);
    }
    SECTION("coefficients 0.1 apart stay 0.1 apart") {
        const InjectivityReport rep = check_injectivity(
            sources, x, eta, {Vector{1.0, 2.0}, Vector{1.0, 2.1}});
        CHECK(rep.injective);
        const double gap =
            sup_distance(rep.entries[0].recovered, rep.entries[1].recovered);
        CHECK(gap == Catch::Approx(0.1).margin(1e-9));
    }
}

TEST_CASE("property: both inclusions of the membership characterization") {
    std::mt19937_64 rng(112);
    std::uniform_real_distribution<double> coeff(-3.0, 3.0);

    // Constructed members pass validation; validated specs classify.
    for (int rep = 0; rep < 20; ++rep) {
        SourceList sources = three_unit_gaussians();
        const std::vector<PolyRandomVariable> x{var("x1"), var("x2")};
        const Vector beta{coeff(rng), coeff(rng)};
        const RandomVectorSpec member = make_family_member(sources, x, beta, var("x3"));
        CHECK(validate_fundamental(member).is_member);
        CHECK_NOTHROW(classify(member));
    }
}

TEST_CASE("property: classification is a function with disjoint fibers") {
    const SourceList sources = three_unit_gaussians();
    const std::vector<PolyRandomVariable> x{var("x1"), var("x2")};
    const RandomVectorSpec a = make_family_member(sources, x, {1.5, -0.5}, var("x3"));
    const RandomVectorSpec b = make_family_member(sources, x, {1.5, -0.5 + 1e-6}, var("x3"));

    // Repeated classification is bit-stable.
    const Vector first = classify(a);
    const Vector second = classify(a);
    CHECK(first == second);

    // Distinct requested coefficients never collapse.
    const double gap = sup_distance(classify(a), classify(b));
    CHECK(gap >= 1e-6 - 1e-9);
}

TEST_CASE("property: members with a constant regressor have centered errors") {
    const SourceList sources = three_unit_gaussians();
    const std::vector<PolyRandomVariable> x{PolyRandomVariable::constant(1.0), var("x1")};
    const RandomVectorSpec member = make_family_member(sources, x, {0.7, -2.0},
                                                       var("x2") * var("x3"));
    REQUIRE(is_stochastic_linear_regression(member));
    const ProjectionResult proj = decompose(member.y, member.x, member.sources);
    CHECK(std::abs(expectation(proj.canonical_error, sources)) <= 1e-10);
    for (const PolyRandomVariable& xj : member.x) {
        CHECK(std::abs(covariance(xj, proj.canonical_error, sources)) <= 1e-10);
    }
}

TEST_CASE("property: classification is invariant under source renaming") {
    std::mt19937_64 rng(113);
    int checked = 0;
    for (int rep = 0; rep < 30 && checked < 8; ++rep) {
        const auto d = slr::testing::random_design(rng, 3, 3);
        RandomVectorSpec spec;
        spec.sources = d.sources;
        spec.x = d.x;
        spec.y = d.y;
        if (!is_stochastic_linear_regression(spec)) continue;
        ++checked;

        std::map<std::string, std::string> mapping;
        SourceList renamed_sources;
        for (std::size_t s = 0; s < d.sources.size(); ++s) {
            const std::string fresh = "renamed_" + std::to_string(s);
            mapping[d.sources[s].name()] = fresh;
            const SourceDistribution& old = d.sources[s];
            if (old.kind() == SourceKind::Gaussian) {
                renamed_sources.add(SourceDistribution::gaussian(fresh, old.variance()));
            } else {
                renamed_sources.add(SourceDistribution::finite_discrete(fresh, old.points()));
            }
        }
        RandomVectorSpec renamed;
        renamed.sources = renamed_sources;
        renamed.y = spec.y.renamed(mapping);
        for (const PolyRandomVariable& xj : spec.x) renamed.x.push_back(xj.renamed(mapping));

        const Vector beta = classify(spec);
        const Vector beta_renamed = classify(renamed);
        CHECK(sup_distance(beta, beta_renamed) <= 1e-12 * (1.0 + sup_norm(beta)));
    }
    CHECK(checked > 0);
}
