#include "hessquot/run_config.hpp"

#include "hessquot/rng.hpp"

#include <cmath>

namespace hessquot {

RunConfig RunConfig::from_json(const nlohmann::json& j) {
    RunConfig c;
    if (j.contains("problem")) {
        const auto& p = j.at("problem");
        c.n = p.value("n", c.n);
        c.k = p.value("k", c.k);
        c.l = p.value("l", c.l);
    }
    if (j.contains("domain")) c.domain_spec = j.at("domain");
    c.f_text = j.value("f", c.f_text);
    c.phi_text = j.value("phi", c.phi_text);
    c.mode = j.value("mode", c.mode);
    if (j.contains("grid")) {
        c.grid_radial = j.at("grid").value("radial", c.grid_radial);
        c.grid_angular = j.at("grid").value("angular", c.grid_angular);
    }
    if (j.contains("solver")) {
        const auto& s = j.at("solver");
        c.solver.newton_tolerance = s.value("newton_tolerance", c.solver.newton_tolerance);
        c.solver.max_newton_iterations =
            s.value("max_newton_iterations", c.solver.max_newton_iterations);
        c.solver.backtrack_factor = s.value("backtrack_factor", c.solver.backtrack_factor);
        c.solver.min_step = s.value("min_step", c.solver.min_step);
        c.solver.initial_dt = s.value("initial_dt", c.solver.initial_dt);
        c.solver.dt_growth = s.value("dt_growth", c.solver.dt_growth);
        c.solver.dt_floor = s.value("dt_floor", c.solver.dt_floor);
        if (s.contains("epsilon_ladder"))
            c.solver.epsilon_ladder = s.at("epsilon_ladder").get<std::vector<double>>();
    }
    c.seed = j.value("seed", c.seed);
    if (j.contains("reference")) c.reference_text = j.at("reference").get<std::string>();
    c.output_dir = j.value("output_dir", c.output_dir);
    return c;
}

nlohmann::json RunConfig::to_json() const {
    nlohmann::json j{
        {"problem", {{"n", n}, {"k", k}, {"l", l}}},
        {"domain", domain_spec},
        {"f", f_text},
        {"phi", phi_text},
        {"mode", mode},
        {"grid", {{"radial", grid_radial}, {"angular", grid_angular}}},
        {"solver",
         {{"newton_tolerance", solver.newton_tolerance},
          {"max_newton_iterations", solver.max_newton_iterations},
          {"backtrack_factor", solver.backtrack_factor},
          {"min_step", solver.min_step},
          {"initial_dt", solver.initial_dt},
          {"dt_growth", solver.dt_growth},
          {"dt_floor", solver.dt_floor},
          {"epsilon_ladder", solver.epsilon_ladder}}},
        {"seed", seed},
        {"output_dir", output_dir}};
    if (reference_text) j["reference"] = *reference_text;
    return j;
}

Domain RunConfig::make_domain() const {
    const std::string kind = domain_spec.value("kind", "disk");
    if (kind == "disk") return Domain::disk(domain_spec.value("radius", 1.0));
    if (kind == "ball") return Domain::ball(domain_spec.value("radius", 1.0));
    if (kind == "ellipse")
        return Domain::ellipse(domain_spec.value("a", 1.5), domain_spec.value("b", 1.0));
    if (kind == "superellipse")
        return Domain::superellipse(domain_spec.value("a", 1.0), domain_spec.value("b", 1.0),
                                    domain_spec.value("p", 4));
    throw ConfigError("config: unknown domain kind '" + kind + "'");
}

ScalarField RunConfig::make_field(const std::string& text) const {
    auto expr = std::make_shared<Expression>(Expression::parse(text, n));
    return [expr](const Eigen::VectorXd& x) {
        return expr->eval(std::span<const double>(x.data(), x.size()));
    };
}

void RunConfig::validate() const {
    HessianPair p(k, l, n);  // throws unless 0 <= l < k <= n
    (void)p;
    const Domain dom = make_domain();
    if (dom.dim() != n)
        throw ConfigError("config: problem dimension does not match the domain");
    if (mode != "robin" && mode != "classical")
        throw ConfigError("config: mode must be 'robin' or 'classical'");
    if (mode == "classical" &&
        convexity_class(dom, n, 256) != ConvexityClass::strictly_convex_for_k)
        throw ConfigError("config: classical mode requires a strictly convex domain");
    Expression::parse(f_text, n);
    Expression::parse(phi_text, n);
    if (reference_text) Expression::parse(*reference_text, n);
    solver.validate();
    if (grid_radial < 4 || grid_angular < 8) throw ConfigError("config: grid too coarse");
    if (dom.kind() == DomainKind::ball) {
        // the ball chart carries azimuthally symmetric fields only
        Expression fe = Expression::parse(f_text, n);
        Expression pe = Expression::parse(phi_text, n);
        Rng rng(seed ^ 0x5bd1e995u);
        for (int trial = 0; trial < 64; ++trial) {
            const double s = rng.uniform(0.0, 0.7), z = rng.uniform(-0.7, 0.7);
            const double az = rng.uniform(0.0, 2.0 * M_PI);
            const double ref[3] = {s, 0.0, z};
            const double rot[3] = {s * std::cos(az), s * std::sin(az), z};
            for (const Expression* e : {&fe, &pe}) {
                const double v0 = e->eval(std::span<const double>(ref, 3));
                const double v1 = e->eval(std::span<const double>(rot, 3));
                if (std::abs(v0 - v1) > 1e-10 * std::max({1.0, std::abs(v0), std::abs(v1)}))
                    throw ConfigError(
                        "config: ball solves require axisymmetric f and phi "
                        "(rotation about x3 changed the value)");
            }
        }
    }
}

}  // namespace hessquot
