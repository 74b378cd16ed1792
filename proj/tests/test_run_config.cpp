#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "hessquot/run_config.hpp"

using namespace hessquot;

namespace {

nlohmann::json base_config() {
    return nlohmann::json{
        {"problem", {{"n", 2}, {"k", 2}, {"l", 0}}},
        {"domain", {{"kind", "disk"}, {"radius", 1.0}}},
        {"f", "1"},
        {"phi", "1.5"},
        {"mode", "robin"},
        {"grid", {{"radial", 16}, {"angular", 32}}},
        {"seed", 11},
        {"output_dir", "out"},
    };
}

}  // namespace

TEST_CASE("round trip preserves every field") {
    nlohmann::json j = base_config();
    j["solver"] = {{"newton_tolerance", 1e-9}, {"epsilon_ladder", {1e-1, 1e-2}}};
    j["reference"] = "0.5*(x1^2+x2^2)";
    const RunConfig cfg = RunConfig::from_json(j);
    const RunConfig back = RunConfig::from_json(cfg.to_json());
    CHECK(back.n == cfg.n);
    CHECK(back.k == cfg.k);
    CHECK(back.l == cfg.l);
    CHECK(back.domain_spec == cfg.domain_spec);
    CHECK(back.f_text == cfg.f_text);
    CHECK(back.phi_text == cfg.phi_text);
    CHECK(back.mode == cfg.mode);
    CHECK(back.grid_radial == cfg.grid_radial);
    CHECK(back.grid_angular == cfg.grid_angular);
    CHECK(back.solver.newton_tolerance == cfg.solver.newton_tolerance);
    CHECK(back.solver.epsilon_ladder == cfg.solver.epsilon_ladder);
    CHECK(back.seed == cfg.seed);
    CHECK(back.reference_text == cfg.reference_text);
    CHECK(back.output_dir == cfg.output_dir);
    CHECK(cfg.to_json() == back.to_json());
}

TEST_CASE("validation enforces the index and mode constraints") {
    RunConfig ok = RunConfig::from_json(base_config());
    CHECK_NOTHROW(ok.validate());

    RunConfig bad_idx = ok;
    bad_idx.l = 2;
    CHECK_THROWS(bad_idx.validate());

    RunConfig bad_dim = ok;
    bad_dim.domain_spec = {{"kind", "ball"}, {"radius", 1.0}};
    CHECK_THROWS_AS(bad_dim.validate(), ConfigError);

    RunConfig bad_mode = ok;
    bad_mode.mode = "dirichlet";
    CHECK_THROWS_AS(bad_mode.validate(), ConfigError);

    RunConfig bad_expr = ok;
    bad_expr.f_text = "sqrt(x1";
    CHECK_THROWS(bad_expr.validate());
}

TEST_CASE("ball configs must carry axisymmetric data") {
    RunConfig cfg = RunConfig::from_json(base_config());
    cfg.n = 3;
    cfg.k = 3;
    cfg.l = 0;
    cfg.domain_spec = {{"kind", "ball"}, {"radius", 1.0}};
    cfg.f_text = "1 + x3^2";  // symmetric about the axis
    cfg.phi_text = "x1^2 + x2^2";
    CHECK_NOTHROW(cfg.validate());
    cfg.f_text = "1 + x1";  // rotating about x3 changes this
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
}

TEST_CASE("field factory evaluates expressions on points") {
    RunConfig cfg = RunConfig::from_json(base_config());
    const ScalarField f = cfg.make_field("1.5*(x1^2+2*x2^2)");
    CHECK(f(Eigen::Vector2d(1.0, 0.0)) == doctest::Approx(1.5));
    CHECK(f(Eigen::Vector2d(0.0, 1.0)) == doctest::Approx(3.0));
}

TEST_CASE("classical mode rejects non-strictly-convex domains") {
    RunConfig cfg = RunConfig::from_json(base_config());
    cfg.mode = "classical";
    cfg.phi_text = "0";
    CHECK_NOTHROW(cfg.validate());
    cfg.domain_spec = {{"kind", "superellipse"}, {"a", 1.0}, {"b", 1.0}, {"p", 4}};
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
}
