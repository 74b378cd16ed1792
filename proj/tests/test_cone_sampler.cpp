#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "hessquot/cone_sampler.hpp"

using namespace hessquot;

TEST_CASE("every sample satisfies its constraint") {
    for (ConeConstraint c : {ConeConstraint::gamma_cone, ConeConstraint::sorted_descending,
                             ConeConstraint::negative_first, ConeConstraint::pinched}) {
        for (int n = 3; n <= 6; ++n) {
            for (int k = 1; k <= n; ++k) {
                if (c == ConeConstraint::pinched && (k < 2 || k >= n)) continue;
                if (c == ConeConstraint::negative_first && k >= n) continue;
                SampleSpec spec;
                spec.n = n;
                spec.k = k;
                spec.l = k - 1;
                spec.seed = 42;
                spec.count = 50;
                spec.constraint = c;
                const SampleBatch batch = sample(spec);
                REQUIRE(batch.spectra.size() == 50);
                for (const auto& lam : batch.spectra) CHECK(satisfies_constraint(spec, lam));
            }
        }
    }
}

TEST_CASE("arrow matrices have the required shape") {
    SampleSpec spec;
    spec.n = 3;
    spec.k = 2;
    spec.l = 0;
    spec.seed = 9;
    spec.count = 100;
    spec.constraint = ConeConstraint::arrow_matrix;
    const SampleBatch batch = sample(spec);
    REQUIRE(batch.matrices.size() == 100);
    for (const auto& A : batch.matrices) {
        CHECK(A(0, 0) < 0.0);
        CHECK(A(1, 2) == 0.0);
        CHECK(admissibility(A, 2).member);
        CHECK(satisfies_constraint(spec, A));
    }
}

TEST_CASE("positive orthant when k equals n") {
    SampleSpec spec;
    spec.n = 3;
    spec.k = 3;
    spec.l = 0;
    spec.seed = 1;
    spec.count = 200;
    const SampleBatch batch = sample(spec);
    for (const auto& lam : batch.spectra) CHECK(lam.values().minCoeff() > 0.0);
}

TEST_CASE("infeasible combinations are rejected up front") {
    SampleSpec spec;
    spec.n = 3;
    spec.k = 3;
    spec.l = 0;
    spec.count = 1;
    spec.constraint = ConeConstraint::negative_first;
    CHECK_THROWS_AS(sample(spec), InfeasibleSpecError);
    spec.constraint = ConeConstraint::pinched;
    CHECK_THROWS_AS(sample(spec), InfeasibleSpecError);
    spec.constraint = ConeConstraint::arrow_matrix;
    CHECK_THROWS_AS(sample(spec), InfeasibleSpecError);
    spec.k = 1;
    spec.constraint = ConeConstraint::pinched;
    CHECK_THROWS_AS(sample(spec), InfeasibleSpecError);
}

TEST_CASE("an empty pinched set exhausts the budget loudly") {
    // at these ratios the cone inequality sigma_{n-1} > 0 is unsatisfiable
    SampleSpec spec;
    spec.n = 6;
    spec.k = 5;
    spec.l = 0;
    spec.seed = 1;
    spec.count = 1;
    spec.constraint = ConeConstraint::pinched;
    spec.delta = 0.7;
    spec.epsilon = 0.9;
    CHECK_THROWS_AS(sample(spec), SamplingExhaustedError);
}

TEST_CASE("determinism: equal specs give bitwise-identical batches") {
    SampleSpec spec;
    spec.n = 4;
    spec.k = 2;
    spec.l = 1;
    spec.seed = 777;
    spec.count = 64;
    spec.constraint = ConeConstraint::pinched;
    spec.delta = 0.4;
    spec.epsilon = 0.1;
    const SampleBatch a = sample(spec);
    const SampleBatch b = sample(spec);
    REQUIRE(a.spectra.size() == b.spectra.size());
    for (std::size_t i = 0; i < a.spectra.size(); ++i)
        CHECK(a.spectra[i].values() == b.spectra[i].values());
}

TEST_CASE("pinched samples satisfy the documented shape") {
    SampleSpec spec;
    spec.n = 3;
    spec.k = 2;
    spec.l = 0;
    spec.seed = 3;
    spec.count = 200;
    spec.constraint = ConeConstraint::pinched;
    spec.delta = 0.4;
    spec.epsilon = 0.1;
    for (const auto& lam : sample(spec).spectra) {
        CHECK(lam[0] > 0.0);
        CHECK(lam[2] < 0.0);
        CHECK(lam[0] >= spec.delta * lam[1]);
        CHECK(-lam[2] >= spec.epsilon * lam[0]);
        CHECK(gamma_k_membership(lam, 2).member);
    }
}

TEST_CASE("coverage: plain draws reach the negative part of the cone") {
    SampleSpec spec;
    spec.n = 4;
    spec.k = 2;
    spec.l = 0;
    spec.seed = 2026;
    spec.count = 10000;
    int negative = 0;
    for (const auto& lam : sample(spec).spectra)
        if (lam.values().minCoeff() < 0.0) ++negative;
    CHECK(negative >= 1000);  // at least 10%
}
