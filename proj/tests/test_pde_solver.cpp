#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "hessquot/estimates_harness.hpp"
#include "hessquot/pde_solver.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

using namespace hessquot;

namespace {

DiscreteField sample_field(const Grid& g, const ScalarField& f) {
    return DiscreteField{g.sample(f), &g};
}

DiscreteField quadratic_start(const Grid& g, double a) {
    Eigen::VectorXd u(g.node_count());
    for (int node = 0; node < g.node_count(); ++node)
        u[node] = a * g.position(node).squaredNorm() / 2.0;
    return DiscreteField{u, &g};
}

}  // namespace

TEST_CASE("residual vanishes on an exact quadratic and flags the zero field") {
    const ManufacturedCase& mc = *find_manufactured("ma-disk-quadratic");
    Grid g(mc.domain, 16, 32);
    const HessianPair p(2, 0, 2);
    DiscreteField u = sample_field(g, mc.exact);
    DiscreteField f = sample_field(g, mc.f);
    DiscreteField phi = sample_field(g, mc.phi);
    const DiscreteField r = residual(u, f, phi, BoundaryMode::robin, 0.0, p);
    CHECK(r.values.lpNorm<Eigen::Infinity>() <= 1e-12);

    DiscreteField zero{Eigen::VectorXd::Zero(g.node_count()), &g};
    CHECK_THROWS_AS(residual(zero, f, phi, BoundaryMode::robin, 0.0, p), NotAdmissibleError);
    const ResidualDiagnostic diag =
        residual_diagnostic(zero, f, phi, BoundaryMode::robin, 0.0, p);
    CHECK_FALSE(diag.admissible);
    CHECK(diag.worst_margin <= 0.0);
    CHECK(diag.worst_node >= 0);
    for (int node = 0; node < g.node_count(); ++node)
        if (!g.is_boundary(node))
            CHECK(diag.values[node] == doctest::Approx(-f.values[node]));  // sigma_2(0)/sigma_0 = 0
}

TEST_CASE("residual consistency is second order on a curved exact solution") {
    const ManufacturedCase& mc = *find_manufactured("quotient-disk-quartic");
    const HessianPair p(2, 1, 2);
    double prev = 0.0;
    for (int level = 0; level < 3; ++level) {
        Grid g(mc.domain, 16 << level, 32 << level);
        DiscreteField u = sample_field(g, mc.exact);
        const DiscreteField r = residual(u, sample_field(g, mc.f), sample_field(g, mc.phi),
                                         BoundaryMode::robin, 0.0, p);
        const double norm = r.values.lpNorm<Eigen::Infinity>();
        if (level > 0) CHECK(std::log2(prev / norm) >= 1.8);
        prev = norm;
    }
}

TEST_CASE("newton from the exact solution needs no iterations") {
    const ManufacturedCase& mc = *find_manufactured("ma-disk-quadratic");
    Grid g(mc.domain, 16, 32);
    SolverConfig cfg;
    const SolveReport rep =
        newton_solve(sample_field(g, mc.exact), sample_field(g, mc.f), sample_field(g, mc.phi),
                     BoundaryMode::robin, 0.0, HessianPair(2, 0, 2), cfg);
    CHECK(rep.converged);
    CHECK(rep.total_newton_iterations == 0);
}

TEST_CASE("failure paths report instead of crashing") {
    const ManufacturedCase& mc = *find_manufactured("ma-disk-quadratic");
    Grid g(mc.domain, 8, 16);
    SolverConfig cfg;
    const HessianPair p(2, 0, 2);
    DiscreteField f = sample_field(g, mc.f);
    DiscreteField phi = sample_field(g, mc.phi);
    // a saddle start lies outside Gamma_2
    Eigen::VectorXd bad(g.node_count());
    for (int node = 0; node < g.node_count(); ++node) {
        const Eigen::VectorXd x = g.position(node);
        bad[node] = 0.5 * (x[0] * x[0] - x[1] * x[1]);
    }
    const SolveReport rep1 = newton_solve({bad, &g}, f, phi, BoundaryMode::robin, 0.0, p, cfg);
    CHECK_FALSE(rep1.converged);
    CHECK(rep1.status == SolveStatus::not_admissible_start);

    SolverConfig strict = cfg;
    strict.max_newton_iterations = 1;
    const SolveReport rep2 =
        newton_solve(quadratic_start(g, 0.1), f, phi, BoundaryMode::robin, 0.0, p, strict);
    CHECK_FALSE(rep2.converged);
    CHECK(rep2.status == SolveStatus::iteration_limit);
}

TEST_CASE("det-type disk problem lands on the paraboloid") {
    const ManufacturedCase& mc = *find_manufactured("ma-disk-quadratic");
    Grid g(mc.domain, 64, 128);
    SolverConfig cfg;
    const HessianPair p(2, 0, 2);
    const SolveReport rep =
        newton_solve(quadratic_start(g, 0.6), sample_field(g, mc.f), sample_field(g, mc.phi),
                     BoundaryMode::robin, 0.0, p, cfg);
    REQUIRE(rep.converged);
    CHECK(max_error_against(rep.solution, mc.exact) <= 1e-8);
    // every accepted iterate stayed in the cone
    for (double m : rep.admissibility_history) CHECK(m > 0.0);
    // subharmonicity: the max sits on the boundary ring
    int arg = 0;
    rep.solution.values.maxCoeff(&arg);
    CHECK(g.is_boundary(arg));
}

TEST_CASE("uniqueness: distinct admissible starts agree") {
    const ManufacturedCase& mc = *find_manufactured("ma-disk-quadratic");
    Grid g(mc.domain, 32, 64);
    SolverConfig cfg;
    const HessianPair p(2, 0, 2);
    DiscreteField f = sample_field(g, mc.f);
    DiscreteField phi = sample_field(g, mc.phi);
    const SolveReport a =
        newton_solve(quadratic_start(g, 0.6), f, phi, BoundaryMode::robin, 0.0, p, cfg);
    const SolveReport b =
        newton_solve(quadratic_start(g, 1.4), f, phi, BoundaryMode::robin, 0.0, p, cfg);
    REQUIRE(a.converged);
    REQUIRE(b.converged);
    CHECK((a.solution.values - b.solution.values).lpNorm<Eigen::Infinity>() <= 1e-8);
}

TEST_CASE("homotopy runs the documented path") {
    const ManufacturedCase& mc = *find_manufactured("quotient-disk-quadratic");
    Grid g(mc.domain, 48, 96);
    SolverConfig cfg;
    const SolveReport rep = solve_homotopy(g, mc.f, mc.phi, BoundaryMode::robin, 0.0,
                                           HessianPair(2, 1, 2), cfg);
    REQUIRE(rep.converged);
    REQUIRE(!rep.newton_iterations.empty());
    CHECK(rep.continuation_ts.front() == 0.0);
    CHECK(rep.newton_iterations.front() == 0);  // exact quadratic start
    CHECK(rep.continuation_ts.back() == 1.0);
    CHECK(max_error_against(rep.solution, mc.exact) <= 1e-8);
    for (double m : rep.admissibility_history) CHECK(m > 0.0);
}

TEST_CASE("ellipse and ball charts solve their quadratics exactly") {
    for (const char* id : {"ma-ellipse-quadratic", "ma-ball-quadratic"}) {
        const ManufacturedCase& mc = *find_manufactured(id);
        Grid g(mc.domain, 24, 48);
        SolverConfig cfg;
        const SolveReport rep =
            solve_homotopy(g, mc.f, mc.phi, BoundaryMode::robin, 0.0,
                           HessianPair(mc.k, mc.l, mc.domain.dim()), cfg);
        REQUIRE(rep.converged);
        CHECK(max_error_against(rep.solution, mc.exact) <= 1e-8);
    }
}

TEST_CASE("ball quartic quotient converges under refinement") {
    const ManufacturedCase& mc = *find_manufactured("quotient-ball-quartic");
    SolverConfig cfg;
    double prev = 0.0;
    for (int level = 0; level < 2; ++level) {
        Grid g(mc.domain, 12 << level, 24 << level);
        const SolveReport rep = solve_homotopy(g, mc.f, mc.phi, BoundaryMode::robin, 0.0,
                                               HessianPair(3, 1, 3), cfg);
        REQUIRE(rep.converged);
        const double err = max_error_against(rep.solution, mc.exact);
        if (level > 0) CHECK(std::log2(prev / err) >= 1.7);
        prev = err;
    }
}

TEST_CASE("classical data on the disk recovers the closed-form constant") {
    Grid g(Domain::disk(1.0), 48, 96);
    SolverConfig cfg;
    const HessianPair p(2, 0, 2);
    const auto one = [](const Eigen::VectorXd&) { return 1.0; };
    const auto zero = [](const Eigen::VectorXd&) { return 0.0; };
    const SolveReport rep = solve_classical_neumann(g, one, zero, p, cfg);
    REQUIRE(rep.converged);
    // exact u_eps = |x|^2/2 - 1/eps - 1/2 gives c_eps = 1 + eps/4
    CHECK(std::abs(rep.c_estimate - 1.0) <= 1e-4);
    REQUIRE(rep.c_eps.size() == cfg.epsilon_ladder.size());
    for (std::size_t i = 0; i < rep.c_eps.size(); ++i) {
        const double eps = cfg.epsilon_ladder[i];
        if (eps <= 1e-2 + 1e-15) {
            const double excess = rep.c_eps[i] - 1.0;
            CHECK(excess == doctest::Approx(eps / 4.0).epsilon(0.2));
        }
    }
    // returned solution is normalized to zero mean
    CHECK(std::abs(field_mean(rep.solution)) <= 1e-9);
    // the ladder closes in on the extrapolated constant monotonically
    for (std::size_t i = 1; i < rep.c_eps.size(); ++i)
        CHECK(std::abs(rep.c_eps[i] - rep.c_estimate) <
              std::abs(rep.c_eps[i - 1] - rep.c_estimate));

    // constant boundary datum shifts the constant: phi = gamma gives c = 1 - gamma
    const auto gamma = [](const Eigen::VectorXd&) { return 0.7; };
    const SolveReport rep2 = solve_classical_neumann(g, one, gamma, p, cfg);
    REQUIRE(rep2.converged);
    CHECK(std::abs(rep2.c_estimate - 0.3) <= 1e-4);

    // a single-rung ladder skips extrapolation
    SolverConfig one_rung = cfg;
    one_rung.epsilon_ladder = {1e-2};
    const SolveReport rep3 = solve_classical_neumann(g, one, zero, p, one_rung);
    REQUIRE(rep3.converged);
    CHECK(rep3.c_estimate == doctest::Approx(rep3.c_eps[0]));
    CHECK(rep3.c_estimate == doctest::Approx(1.0 + 1e-2 / 4.0).epsilon(1e-3));
}

TEST_CASE("continuation reports a floor failure instead of hanging") {
    // one-iteration newton converges at the exact t=0 start but not beyond,
    // so the step halves down to the floor
    const ManufacturedCase& mc = *find_manufactured("quotient-disk-quadratic");
    Grid g(mc.domain, 12, 24);
    SolverConfig cfg;
    cfg.max_newton_iterations = 1;
    cfg.dt_floor = 1e-2;
    const SolveReport rep = solve_homotopy(g, mc.f, mc.phi, BoundaryMode::robin, 0.0,
                                           HessianPair(2, 1, 2), cfg);
    CHECK_FALSE(rep.converged);
    CHECK(rep.status == SolveStatus::continuation_failure);
    CHECK(rep.continuation_ts.back() < 1.0);  // records the last good t
    CHECK(rep.detail.find("floor") != std::string::npos);
}

TEST_CASE("no chart exists for superellipse domains") {
    CHECK_THROWS_AS(Grid(Domain::superellipse(1.0, 1.0, 4), 16, 32), std::invalid_argument);
}

TEST_CASE("solution csv dump has the documented columns") {
    const ManufacturedCase& mc = *find_manufactured("ma-disk-quadratic");
    Grid g(mc.domain, 8, 16);
    DiscreteField u = sample_field(g, mc.exact);
    std::ostringstream os;
    write_solution_csv(os, u, sample_field(g, mc.f), sample_field(g, mc.phi),
                       BoundaryMode::robin, 0.0, HessianPair(2, 0, 2));
    const std::string text = os.str();
    CHECK(text.rfind("node,x1,x2,u,grad_norm,eig1,eig2,residual,boundary", 0) == 0);
    CHECK(std::count(text.begin(), text.end(), '\n') ==
          static_cast<long>(g.node_count()) + 1);
}
