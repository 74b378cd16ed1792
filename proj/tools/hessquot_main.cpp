#include "hessquot/estimates_harness.hpp"
#include "hessquot/inequality_suite.hpp"
#include "hessquot/run_config.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>

namespace fs = std::filesystem;
using namespace hessquot;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitCheckFailure = 1;
constexpr int kExitUsage = 2;
constexpr int kExitSolverFailure = 3;

struct RangeSpec {
    int lo = 3, hi = 6;
};

// "3..6" or "4"
RangeSpec parse_range(const std::string& text) {
    RangeSpec r;
    const auto dots = text.find("..");
    if (dots == std::string::npos) {
        r.lo = r.hi = std::stoi(text);
    } else {
        r.lo = std::stoi(text.substr(0, dots));
        r.hi = std::stoi(text.substr(dots + 2));
    }
    if (r.lo < 1 || r.hi < r.lo) throw CLI::ValidationError("--n", "bad dimension range");
    return r;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config: cannot open '" + path + "'");
    nlohmann::json j;
    in >> j;
    RunConfig cfg = RunConfig::from_json(j);
    if (const char* env_seed = std::getenv("HESSQUOT_SEED"))
        cfg.seed = std::strtoull(env_seed, nullptr, 10);
    cfg.validate();
    return cfg;
}

void write_file(const fs::path& path, const std::string& text) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream out(path);
    out << text;
}

int run_verify(const RangeSpec& range, int samples, std::uint64_t seed, int threads, double delta,
               double epsilon, const std::string& out_path) {
    SuiteConfig cfg;
    cfg.n_min = range.lo;
    cfg.n_max = range.hi;
    cfg.samples = samples;
    cfg.seed = seed;
    cfg.threads = threads;
    cfg.delta = delta;
    cfg.epsilon = epsilon;
    const auto t0 = std::chrono::steady_clock::now();
    const std::vector<CheckReport> reports = run_inequality_suite(cfg);
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    nlohmann::json out = nlohmann::json::array();
    int failed = 0;
    for (const auto& rep : reports) {
        out.push_back(rep.to_json());
        if (!rep.passed()) ++failed;
        std::printf("%-44s samples=%-6d worst=%+.3e  %s\n", rep.name.c_str(), rep.samples,
                    rep.worst_margin, rep.passed() ? "pass" : "FAIL");
    }
    std::printf("%zu checks, %d failed, %.1fs\n", reports.size(), failed, secs);
    if (!out_path.empty()) write_file(out_path, out.dump(2));
    return failed == 0 ? kExitOk : kExitCheckFailure;
}

int run_solve(const RunConfig& cfg) {
    const Domain dom = cfg.make_domain();
    Grid grid(dom, cfg.grid_radial, cfg.grid_angular);
    const HessianPair p = cfg.pair();
    const ScalarField f = cfg.make_field(cfg.f_text);
    const ScalarField phi = cfg.make_field(cfg.phi_text);

    const SolveReport rep = solve_homotopy(grid, f, phi, BoundaryMode::robin, 0.0, p, cfg.solver);
    nlohmann::json artifact = rep.to_json();
    artifact["config"] = cfg.to_json();

    if (!rep.converged) {
        artifact["error"] = rep.detail;
        write_file(fs::path(cfg.output_dir) / "report.json", artifact.dump(2));
        std::fprintf(stderr, "solve failed: %s\n", rep.detail.c_str());
        return kExitSolverFailure;
    }

    double sup_f = 0.0, max_phi = 0.0;
    for (int node = 0; node < grid.node_count(); ++node) {
        if (!grid.is_boundary(node))
            sup_f = std::max(sup_f, f(grid.position(node)));
        else
            max_phi = std::max(max_phi, std::abs(phi(grid.position(node))));
    }
    const AprioriBounds bounds = AprioriBounds::c0_bound(sup_f, max_phi, dom, p);
    const AuditReport audit = audit_solution(rep.solution, p, bounds);
    artifact["audit"] = audit.to_json();
    artifact["bounds"] = {{"M0", bounds.M0}, {"A", bounds.A}, {"diam", bounds.diam}};

    if (cfg.reference_text) {
        const ScalarField exact = cfg.make_field(*cfg.reference_text);
        const double err = max_error_against(rep.solution, exact);
        artifact["reference_max_error"] = err;
        std::printf("max error vs reference: %.3e\n", err);
    }

    std::ostringstream csv;
    write_solution_csv(csv, rep.solution, DiscreteField{grid.sample(f), &grid},
                       DiscreteField{grid.sample(phi), &grid}, BoundaryMode::robin, 0.0, p);
    write_file(fs::path(cfg.output_dir) / "solution.csv", csv.str());
    write_file(fs::path(cfg.output_dir) / "report.json", artifact.dump(2));

    std::printf("converged in %d newton iterations over %zu continuation steps\n",
                rep.total_newton_iterations, rep.continuation_ts.size());
    std::printf("audit: %s (c0 %d, cone %d, boundary identity %d, max-at-boundary %d)\n",
                audit.passed() ? "pass" : "FAIL", audit.c0_ok, audit.admissible_everywhere,
                audit.boundary_identity_ok, audit.max_at_boundary_ok);
    return audit.passed() ? kExitOk : kExitCheckFailure;
}

int run_classical(const RunConfig& cfg) {
    const Domain dom = cfg.make_domain();
    Grid grid(dom, cfg.grid_radial, cfg.grid_angular);
    const HessianPair p = cfg.pair();
    const ScalarField f = cfg.make_field(cfg.f_text);
    const ScalarField phi = cfg.make_field(cfg.phi_text);

    const SolveReport rep = solve_classical_neumann(grid, f, phi, p, cfg.solver);
    nlohmann::json artifact = rep.to_json();
    artifact["config"] = cfg.to_json();
    if (!rep.converged) {
        artifact["error"] = rep.detail;
        write_file(fs::path(cfg.output_dir) / "report.json", artifact.dump(2));
        std::fprintf(stderr, "classical sweep failed: %s\n", rep.detail.c_str());
        return kExitSolverFailure;
    }
    std::ostringstream csv;
    write_solution_csv(csv, rep.solution, DiscreteField{grid.sample(f), &grid},
                       DiscreteField{grid.sample(phi), &grid}, BoundaryMode::epsilon,
                       cfg.solver.epsilon_ladder.back(), p);
    write_file(fs::path(cfg.output_dir) / "solution.csv", csv.str());
    write_file(fs::path(cfg.output_dir) / "report.json", artifact.dump(2));
    std::printf("c = %.10f\n", rep.c_estimate);
    for (std::size_t i = 0; i < rep.c_eps.size(); ++i)
        std::printf("  eps=%-8.2e c_eps=%.10f\n", rep.ladder[i], rep.c_eps[i]);
    return kExitOk;
}

int run_converge(const RunConfig& cfg, const std::string& case_id, int refinements) {
    const ManufacturedCase* mc = find_manufactured(case_id);
    if (!mc) {
        std::fprintf(stderr, "unknown case '%s'; available:\n", case_id.c_str());
        for (const auto& c : manufactured_catalog())
            std::fprintf(stderr, "  %s\n", c.id.c_str());
        return kExitUsage;
    }
    const ConvergenceStudy study =
        convergence_study(*mc, cfg.grid_radial, cfg.grid_angular, refinements, cfg.solver);
    std::ostringstream csv;
    write_convergence_csv(csv, study);
    write_file(fs::path(cfg.output_dir) / "convergence.csv", csv.str());
    std::printf("%s", csv.str().c_str());
    if (!study.all_solved) return kExitSolverFailure;
    if (study.stencil_exact) {
        std::printf("errors at rounding level; order not applicable\n");
        return kExitOk;
    }
    std::printf("min observed order %.3f\n", study.min_order);
    return study.min_order >= 1.8 ? kExitOk : kExitCheckFailure;
}

int run_report(const RunConfig& cfg, int samples, int threads) {
    int rc = kExitOk;
    const auto merge = [&rc](int sub) { rc = std::max(rc, sub); };

    std::printf("== inequality suite\n");
    merge(run_verify(RangeSpec{3, 6}, samples, cfg.seed, threads, 0.1, 0.1,
                     (fs::path(cfg.output_dir) / "inequalities.json").string()));

    std::printf("== configured solve\n");
    if (cfg.mode == "classical")
        merge(run_classical(cfg));
    else
        merge(run_solve(cfg));

    std::printf("== convergence study (quotient-disk-quartic)\n");
    RunConfig conv = cfg;
    conv.grid_radial = 16;
    conv.grid_angular = 32;
    merge(run_converge(conv, "quotient-disk-quartic", 3));

    std::printf("== epsilon uniformity (disk)\n");
    {
        Grid grid(Domain::disk(1.0), 32, 64);
        const EpsilonStudy study = epsilon_uniformity_study(
            grid, [](const Eigen::VectorXd&) { return 1.0; },
            [](const Eigen::VectorXd&) { return 0.0; }, HessianPair(2, 0, 2), cfg.solver);
        std::ostringstream csv;
        write_epsilon_study_csv(csv, study);
        write_file(fs::path(cfg.output_dir) / "epsilon_study.csv", csv.str());
        std::printf("%s", csv.str().c_str());
        if (!study.all_solved)
            merge(kExitSolverFailure);
        else if (!study.uniform_ok)
            merge(kExitCheckFailure);
    }
    return rc;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Workbench for Neumann problems of Hessian quotient equations"};
    app.require_subcommand(1);
    app.footer(
        "Config schema (JSON):\n"
        "  problem: {n, k, l} with 0 <= l < k <= n\n"
        "  domain: {kind: disk|ellipse|ball|superellipse, radius | a,b[,p]}\n"
        "  f, phi, reference: expressions over x1..xn (+ - * / ^, sin, cos, exp,\n"
        "                     sqrt, abs, pi); ^ is right-associative, tighter than\n"
        "                     unary minus\n"
        "  mode: robin (u_nu = -u + phi) | classical (strictly convex domains)\n"
        "  grid: {radial, angular}               default 64 x 128\n"
        "  solver defaults: newton_tolerance 1e-10 (max-norm residual),\n"
        "    max_newton_iterations 50, backtrack_factor 0.5, min_step 2^-20,\n"
        "    initial_dt 0.1, dt_growth 1.5, dt_floor 1e-4,\n"
        "    epsilon_ladder [1e-1, 3e-2, 1e-2, 3e-3, 1e-3]\n"
        "  seed: 64-bit integer (HESSQUOT_SEED overrides), output_dir: path\n"
        "Exit codes: 0 ok, 1 check failure, 2 usage error, 3 solver failure.");
    int threads = 0;
    app.add_option("--threads", threads, "worker threads (0 = all cores)");

    auto* verify = app.add_subcommand("verify-inequalities", "randomized cone inequality checks");
    std::string n_range = "3..6";
    int samples = 10000;
    std::uint64_t seed = 7;
    double delta = 0.1, epsilon = 0.1;
    std::string verify_out;
    verify->add_option("--n", n_range, "dimension or range, e.g. 4 or 3..6");
    verify->add_option("--samples", samples, "samples per check");
    verify->add_option("--seed", seed, "base seed");
    verify->add_option("--delta", delta, "pinched-spectrum ratio bound in (0,1]");
    verify->add_option("--epsilon", epsilon, "pinched-spectrum ratio bound in (0,1]");
    verify->add_option("--out", verify_out, "write the JSON report here");

    std::string config_path;
    auto* solve = app.add_subcommand("solve", "one continuation solve plus audit");
    solve->add_option("--config", config_path, "JSON run configuration")->required();

    auto* classical = app.add_subcommand("classical", "vanishing-eps sweep; prints c");
    classical->add_option("--config", config_path, "JSON run configuration")->required();

    auto* converge = app.add_subcommand("converge", "manufactured-solution convergence study");
    std::string case_id = "quotient-disk-quartic";
    int refinements = 3;
    converge->add_option("--config", config_path, "JSON run configuration")->required();
    converge->add_option("--case", case_id, "manufactured case id");
    converge->add_option("--refinements", refinements, "number of dyadic levels");

    auto* report = app.add_subcommand("report", "bundle suite, solve, studies into the output dir");
    report->add_option("--config", config_path, "JSON run configuration")->required();
    int report_samples = 2000;
    report->add_option("--samples", report_samples, "samples per inequality check");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return e.get_exit_code() == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (verify->parsed())
            return run_verify(parse_range(n_range), samples, seed, threads, delta, epsilon,
                              verify_out);
        const RunConfig cfg = load_config(config_path);
        if (solve->parsed()) {
            if (cfg.mode != "robin") {
                std::fprintf(stderr, "config mode must be 'robin' for this subcommand\n");
                return kExitUsage;
            }
            return run_solve(cfg);
        }
        if (classical->parsed()) {
            if (cfg.mode != "classical") {
                std::fprintf(stderr, "config mode must be 'classical' for this subcommand\n");
                return kExitUsage;
            }
            return run_classical(cfg);
        }
        if (converge->parsed()) return run_converge(cfg, case_id, refinements);
        if (report->parsed()) return run_report(cfg, report_samples, threads);
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "%s\n", e.what());
        return kExitUsage;
    } catch (const ParseError& e) {
        std::fprintf(stderr, "expression error at offset %zu: %s\n", e.offset(), e.what());
        return kExitUsage;
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "%s\n", e.what());
        return kExitUsage;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "%s\n", e.what());
        return kExitSolverFailure;
    }
    return kExitUsage;
}
