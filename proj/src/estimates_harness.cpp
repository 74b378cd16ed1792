#include "hessquot/estimates_harness.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

namespace hessquot {

AprioriBounds AprioriBounds::c0_bound(double sup_f, double max_abs_phi, const Domain& dom,
                                      const HessianPair& p) {
    if (!(sup_f > 0.0)) throw std::invalid_argument("c0_bound: sup f must be positive");
    AprioriBounds b;
    b.diam = dom.diameter();
    b.max_abs_phi = max_abs_phi;
    b.A = 0.5 * std::pow(binomial(p.n, p.l) / binomial(p.n, p.k) * sup_f, 1.0 / (p.k - p.l));
    b.M0 = std::max(max_abs_phi, max_abs_phi + 2.0 * b.A * b.diam + b.A * b.diam * b.diam);
    return b;
}

nlohmann::json AuditReport::to_json() const {
    return nlohmann::json{{"c0_ok", c0_ok},
                          {"admissible_everywhere", admissible_everywhere},
                          {"boundary_identity_ok", boundary_identity_ok},
                          {"max_at_boundary_ok", max_at_boundary_ok},
                          {"c0_margin", c0_margin},
                          {"admissibility_margin", admissibility_margin},
                          {"boundary_identity_margin", boundary_identity_margin},
                          {"max_at_boundary_margin", max_at_boundary_margin}};
}

AuditReport audit_solution(const DiscreteField& u, const HessianPair& p,
                           const AprioriBounds& bounds) {
    const Grid& g = *u.grid;
    AuditReport rep;

    rep.c0_margin = bounds.M0 - u.values.cwiseAbs().maxCoeff();
    rep.c0_ok = rep.c0_margin >= 0.0;

    double min_margin = std::numeric_limits<double>::infinity();
    double max_interior = -std::numeric_limits<double>::infinity();
    double max_boundary = -std::numeric_limits<double>::infinity();
    double worst_identity = 0.0;
    for (int node = 0; node < g.node_count(); ++node) {
        const ConeMargin cm =
            gamma_k_membership(eigen_sym(g.hessian(u.values, node)).eigenvalues, p.k);
        min_margin = std::min(min_margin, cm.margin);
        if (g.is_boundary(node)) {
            max_boundary = std::max(max_boundary, u.values[node]);
            const Eigen::VectorXd grad = g.gradient(u.values, node);
            const Eigen::VectorXd nu = g.boundary_normal(node);
            const SymMatrix c = tangential_projector(nu);
            const double tangential = (c.matrix() * grad).squaredNorm();
            const double un = g.normal_derivative(u.values, node);
            const double defect = std::abs(grad.squaredNorm() - tangential - un * un);
            worst_identity = std::max(worst_identity, defect);
        } else {
            max_interior = std::max(max_interior, u.values[node]);
        }
    }
    rep.admissibility_margin = min_margin;
    rep.admissible_everywhere = min_margin > 0.0;
    rep.boundary_identity_margin = 1e-8 - worst_identity;
    rep.boundary_identity_ok = rep.boundary_identity_margin >= 0.0;
    const double scale = std::max(1.0, u.values.cwiseAbs().maxCoeff());
    rep.max_at_boundary_margin = max_boundary - max_interior;
    rep.max_at_boundary_ok = rep.max_at_boundary_margin >= -1e-12 * scale;
    return rep;
}

namespace {

double median_of(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t m = v.size();
    return m % 2 ? v[m / 2] : 0.5 * (v[m / 2 - 1] + v[m / 2]);
}

double spread(const std::vector<double>& v) {
    if (v.empty()) return 0.0;
    const double med = median_of(v);
    return med > 0.0 ? *std::max_element(v.begin(), v.end()) / med
                     : std::numeric_limits<double>::infinity();
}

}  // namespace

EpsilonStudy epsilon_uniformity_study(const Grid& grid, const ScalarField& f,
                                      const ScalarField& phi, const HessianPair& p,
                                      const SolverConfig& cfg) {
    EpsilonStudy study;
    study.all_solved = true;

    double sup_f = 0.0, max_phi = 0.0;
    for (int node = 0; node < grid.node_count(); ++node) {
        const Eigen::VectorXd x = grid.position(node);
        if (!grid.is_boundary(node)) sup_f = std::max(sup_f, f(x));
        else max_phi = std::max(max_phi, std::abs(phi(x)));
    }
    study.m0_bound = AprioriBounds::c0_bound(sup_f, max_phi, grid.domain(), p).M0;

    for (double eps : cfg.epsilon_ladder) {
        EpsilonStudyRow row;
        row.eps = eps;
        SolveReport rep = solve_homotopy(grid, f, phi, BoundaryMode::epsilon, eps, p, cfg);
        row.solved = rep.converged;
        if (rep.converged) {
            const Eigen::VectorXd& u = rep.solution.values;
            row.sup_eps_u = eps * u.cwiseAbs().maxCoeff();
            double gmax = 0.0, hmax = 0.0;
            for (int node = 0; node < grid.node_count(); ++node) {
                gmax = std::max(gmax, grid.gradient(u, node).norm());
                const Spectrum ev = eigen_sym(grid.hessian(u, node)).eigenvalues;
                hmax = std::max(hmax, ev.values().cwiseAbs().maxCoeff());
            }
            row.sup_grad = gmax;
            row.sup_hess = hmax;
            row.c_eps = -eps * field_mean(rep.solution);
        } else {
            study.all_solved = false;
        }
        study.rows.push_back(row);
    }

    std::vector<double> eu, gu, hu;
    for (const auto& r : study.rows)
        if (r.solved) {
            eu.push_back(r.sup_eps_u);
            gu.push_back(r.sup_grad);
            hu.push_back(r.sup_hess);
        }
    study.spread_eps_u = spread(eu);
    study.spread_grad = spread(gu);
    study.spread_hess = spread(hu);
    study.uniform_ok = study.all_solved && study.spread_eps_u < 2.0 && study.spread_grad < 2.0 &&
                       study.spread_hess < 2.0;
    study.eps_u_within_m0 =
        study.all_solved &&
        std::all_of(study.rows.begin(), study.rows.end(),
                    [&](const EpsilonStudyRow& r) { return r.sup_eps_u <= study.m0_bound; });
    return study;
}

void write_epsilon_study_csv(std::ostream& os, const EpsilonStudy& study) {
    os << "eps,sup_eps_u,sup_grad,sup_hess,c_eps,solved\n";
    os.precision(17);
    for (const auto& r : study.rows)
        os << r.eps << "," << r.sup_eps_u << "," << r.sup_grad << "," << r.sup_hess << ","
           << r.c_eps << "," << (r.solved ? 1 : 0) << "\n";
}

namespace {

ScalarField constant_field(double v) {
    return [v](const Eigen::VectorXd&) { return v; };
}

std::vector<ManufacturedCase> build_catalog() {
    std::vector<ManufacturedCase> cat;

    // det-type problem on the unit disk, quadratic paraboloid
    cat.push_back(ManufacturedCase{
        "ma-disk-quadratic", 2, 0, Domain::disk(1.0), constant_field(1.0),
        constant_field(1.5),
        [](const Eigen::VectorXd& x) { return 0.5 * x.squaredNorm(); }, true});

    // quotient on the unit disk, elliptic paraboloid
    cat.push_back(ManufacturedCase{
        "quotient-disk-quadratic", 2, 1, Domain::disk(1.0), constant_field(2.0 / 3.0),
        [](const Eigen::VectorXd& x) { return 1.5 * (x[0] * x[0] + 2.0 * x[1] * x[1]); },
        [](const Eigen::VectorXd& x) { return 0.5 * (x[0] * x[0] + 2.0 * x[1] * x[1]); }, false});

    // radial quartic, det-type: u = r^2/2 + r^4/16, spectrum (1+3r^2/4, 1+r^2/4)
    cat.push_back(ManufacturedCase{
        "ma-disk-quartic", 2, 0, Domain::disk(1.0),
        [](const Eigen::VectorXd& x) {
            const double r2 = x.squaredNorm();
            return (1.0 + 0.75 * r2) * (1.0 + 0.25 * r2);
        },
        constant_field(1.8125),
        [](const Eigen::VectorXd& x) {
            const double r2 = x.squaredNorm();
            return 0.5 * r2 + r2 * r2 / 16.0;
        },
        false});

    // quartic quotient: u = (x1^2 + 2 x2^2)/2 + x1^4/12, spectrum (1+x1^2, 2)
    cat.push_back(ManufacturedCase{
        "quotient-disk-quartic", 2, 1, Domain::disk(1.0),
        [](const Eigen::VectorXd& x) {
            const double t = x[0] * x[0];
            return 2.0 * (1.0 + t) / (3.0 + t);
        },
        [](const Eigen::VectorXd& x) {
            const double t = x[0] * x[0];
            return 1.5 * t + 3.0 * x[1] * x[1] + (5.0 / 12.0) * t * t;
        },
        [](const Eigen::VectorXd& x) {
            const double t = x[0] * x[0];
            return 0.5 * (t + 2.0 * x[1] * x[1]) + t * t / 12.0;
        },
        false});

    // quadratic paraboloid on an ellipse; the boundary datum follows the normal
    cat.push_back(ManufacturedCase{
        "ma-ellipse-quadratic", 2, 0, Domain::ellipse(1.5, 1.0), constant_field(1.0),
        [](const Eigen::VectorXd& x) {
            Eigen::Vector2d nu(x[0] / (1.5 * 1.5), x[1]);
            nu.normalize();
            return x.dot(nu) + 0.5 * x.squaredNorm();
        },
        [](const Eigen::VectorXd& x) { return 0.5 * x.squaredNorm(); }, true});

    // det-type on the unit ball
    cat.push_back(ManufacturedCase{
        "ma-ball-quadratic", 3, 0, Domain::ball(1.0), constant_field(1.0),
        constant_field(1.5),
        [](const Eigen::VectorXd& x) { return 0.5 * x.squaredNorm(); }, true});

    // radial quartic quotient on the unit ball: spectrum (1+3r^2/4, 1+r^2/4, 1+r^2/4)
    cat.push_back(ManufacturedCase{
        "quotient-ball-quartic", 3, 1, Domain::ball(1.0),
        [](const Eigen::VectorXd& x) {
            const double r2 = x.squaredNorm();
            const double gpp = 1.0 + 0.75 * r2, gor = 1.0 + 0.25 * r2;
            return gpp * gor * gor / (gpp + 2.0 * gor);
        },
        constant_field(1.8125),
        [](const Eigen::VectorXd& x) {
            const double r2 = x.squaredNorm();
            return 0.5 * r2 + r2 * r2 / 16.0;
        },
        false});

    return cat;
}

}  // namespace

const std::vector<ManufacturedCase>& manufactured_catalog() {
    static const std::vector<ManufacturedCase> cat = build_catalog();
    return cat;
}

const ManufacturedCase* find_manufactured(const std::string& id) {
    for (const auto& c : manufactured_catalog())
        if (c.id == id) return &c;
    return nullptr;
}

double max_error_against(const DiscreteField& u, const ScalarField& exact) {
    const Grid& g = *u.grid;
    double err = 0.0;
    for (int node = 0; node < g.node_count(); ++node)
        err = std::max(err, std::abs(u.values[node] - exact(g.position(node))));
    return err;
}

ConvergenceStudy convergence_study(const ManufacturedCase& mc, int base_radial, int base_angular,
                                   int refinements, const SolverConfig& cfg) {
    ConvergenceStudy study;
    study.all_solved = true;
    const HessianPair p(mc.k, mc.l, mc.domain.dim());
    for (int level = 0; level < refinements; ++level) {
        const int factor = 1 << level;
        ConvergenceRow row;
        row.n_radial = base_radial * factor;
        row.n_angular = base_angular * factor;
        Grid grid(mc.domain, row.n_radial, row.n_angular);
        row.h = grid.radial_step() * std::max(mc.domain.semi_axis_a(), mc.domain.semi_axis_b());
        SolverConfig level_cfg = cfg;
        // keep the convergence target above the stencil roundoff floor, which
        // grows like 1/h^3 near the pole
        level_cfg.newton_tolerance =
            cfg.newton_tolerance * std::max(1.0, static_cast<double>(factor * factor * factor));
        SolveReport rep = solve_homotopy(grid, mc.f, mc.phi, BoundaryMode::robin, 0.0, p, level_cfg);
        row.solved = rep.converged;
        row.observed_order = std::numeric_limits<double>::quiet_NaN();
        if (rep.converged) {
            row.max_error = max_error_against(rep.solution, mc.exact);
            if (!study.rows.empty() && study.rows.back().solved && row.max_error > 0.0)
                row.observed_order = std::log2(study.rows.back().max_error / row.max_error);
        } else {
            study.all_solved = false;
        }
        study.rows.push_back(row);
    }
    study.stencil_exact =
        study.all_solved && std::all_of(study.rows.begin(), study.rows.end(),
                                        [](const ConvergenceRow& r) { return r.max_error <= 1e-8; });
    study.min_order = std::numeric_limits<double>::infinity();
    for (std::size_t i = 1; i < study.rows.size(); ++i)
        if (study.rows[i].solved && std::isfinite(study.rows[i].observed_order))
            study.min_order = std::min(study.min_order, study.rows[i].observed_order);
    if (!std::isfinite(study.min_order)) study.min_order = 0.0;
    return study;
}

void write_convergence_csv(std::ostream& os, const ConvergenceStudy& study) {
    os << "n_radial,n_angular,h,max_error,observed_order,solved\n";
    os.precision(17);
    for (const auto& r : study.rows)
        os << r.n_radial << "," << r.n_angular << "," << r.h << "," << r.max_error << ","
           << r.observed_order << "," << (r.solved ? 1 : 0) << "\n";
}

bool comparison_min_on_boundary(const DiscreteField& u, const AprioriBounds& bounds) {
    const Grid& g = *u.grid;
    double min_interior = std::numeric_limits<double>::infinity();
    double min_boundary = std::numeric_limits<double>::infinity();
    for (int node = 0; node < g.node_count(); ++node) {
        const double v = u.values[node] - bounds.A * g.position(node).squaredNorm();
        if (g.is_boundary(node))
            min_boundary = std::min(min_boundary, v);
        else
            min_interior = std::min(min_interior, v);
    }
    const double scale = std::max(1.0, u.values.cwiseAbs().maxCoeff());
    return min_boundary <= min_interior + 1e-12 * scale;
}

}  // namespace hessquot
