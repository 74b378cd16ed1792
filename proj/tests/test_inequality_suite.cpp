#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "hessquot/inequality_suite.hpp"

#include <cmath>

using namespace hessquot;

TEST_CASE("inequality constants") {
    const auto c = ConeInequalityConstants::compute(3, 2, 0, 0.1, 0.1);
    CHECK(c.c0 == doctest::Approx(2.5e-5));  // min{eps^2 del^2/4, eps^2 del/8} at n=3
    CHECK(c.c1 == doctest::Approx((3.0 / 2.0) * (2.0 / 3.0) * c.c0 * c.c0 / 2.0));
    CHECK(c.c2 == doctest::Approx(0.5));
    CHECK(c.c3 == doctest::Approx(1.0));

    const auto d = ConeInequalityConstants::compute(3, 2, 1, 0.1, 0.1);
    CHECK(d.c2 == doctest::Approx((3.0 / 2.0) * (1.0 / 2.0) * (1.0 / 2.0)));
    CHECK(d.c3 == doctest::Approx((1.0 / 2.0) / 3.0));
    for (int n = 3; n <= 6; ++n)
        for (int k = 1; k <= n; ++k)
            for (int l = 0; l < k; ++l) {
                const auto cs = ConeInequalityConstants::compute(n, k, l, 0.1, 0.1);
                CHECK(cs.c0 > 0.0);
                CHECK(cs.c1 > 0.0);
                CHECK(cs.c2 > 0.0);
                CHECK(cs.c3 > 0.0);
            }
}

TEST_CASE("hand-checked margins survive the checks") {
    // identities at (1,2,3): sigma_2 = 6 + 1*5; minor sum 6+3+2 = (3-2)*11
    const CheckReport id = check_sigma_identities(3, 2, 500, 12345);
    CHECK(id.passed());
    CHECK(id.worst_margin >= -1e-10);

    const CheckReport sorted = check_sorted_cone_bounds(3, 2, 500, 5);
    CHECK(sorted.passed());

    const CheckReport nm = check_maclaurin_monotonicity(3, 2, 1, 500, 5);
    CHECK(nm.passed());

    const CheckReport neg = check_negative_first_dominance(3, 2, 0, 500, 5);
    CHECK(neg.passed());

    const CheckReport arrow = check_arrow_matrix_dominance(3, 2, 0, 500, 5);
    CHECK(arrow.passed());

    const CheckReport pinched = check_pinched_dominance(3, 2, 0, 0.1, 0.1, 500, 5);
    CHECK(pinched.passed());

    const CheckReport diag = check_diagonal_gradient_consistency(3, 2, 500, 5);
    CHECK(diag.passed());
}

TEST_CASE("margins are deterministic and independent of thread count") {
    const CheckReport one = check_negative_first_dominance(4, 2, 1, 2000, 99, 1);
    const CheckReport four = check_negative_first_dominance(4, 2, 1, 2000, 99, 4);
    CHECK(one.worst_margin == four.worst_margin);
    CHECK(one.failure_count == four.failure_count);
}

TEST_CASE("report json carries the typed fields") {
    const CheckReport rep = check_sigma_identities(3, 1, 100, 3);
    const nlohmann::json j = rep.to_json();
    CHECK(j.at("name").get<std::string>() == rep.name);
    CHECK(j.at("samples").get<int>() == 100);
    CHECK(j.at("failure_count").get<int>() == 0);
    CHECK(j.contains("worst_margin"));
    CHECK(j.contains("tolerance"));
    CHECK(j.contains("failures"));
}

TEST_CASE("failure invariant: empty failures iff worst margin above -tolerance") {
    for (const auto& rep :
         {check_sigma_identities(4, 2, 300, 8), check_sorted_cone_bounds(5, 3, 300, 8),
          check_negative_first_dominance(5, 3, 1, 300, 8)}) {
        CHECK(rep.failures.empty() == (rep.worst_margin >= -rep.tolerance));
        CHECK((rep.failure_count == 0) == rep.failures.empty());
    }
}

TEST_CASE("small full-suite slice reports zero failures") {
    SuiteConfig cfg;
    cfg.n_min = 3;
    cfg.n_max = 4;
    cfg.samples = 400;
    cfg.seed = 7;
    cfg.threads = 2;
    const auto reports = run_inequality_suite(cfg);
    CHECK(reports.size() > 20);
    for (const auto& rep : reports) {
        INFO(rep.name, " worst margin ", rep.worst_margin);
        CHECK(rep.passed());
    }
}
