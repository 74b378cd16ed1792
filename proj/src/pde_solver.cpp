#include "hessquot/pde_solver.hpp"

#include <Eigen/Sparse>
#include <Eigen/SparseLU>

#include <algorithm>
#include <cmath>
#include <ostream>
#include <sstream>

namespace hessquot {

void SolverConfig::validate() const {
    if (!(newton_tolerance > 0.0) || !(min_step > 0.0) || !(dt_floor > 0.0) ||
        !(initial_dt > 0.0) || max_newton_iterations < 1)
        throw std::invalid_argument("SolverConfig: tolerances and steps must be positive");
    for (std::size_t i = 1; i < epsilon_ladder.size(); ++i)
        if (!(epsilon_ladder[i] < epsilon_ladder[i - 1]))
            throw std::invalid_argument("SolverConfig: epsilon ladder must decrease strictly");
    for (double e : epsilon_ladder)
        if (!(e > 0.0)) throw std::invalid_argument("SolverConfig: epsilon values must be positive");
}

std::string to_string(SolveStatus s) {
    switch (s) {
        case SolveStatus::converged: return "converged";
        case SolveStatus::line_search_failure: return "line-search-failure";
        case SolveStatus::iteration_limit: return "iteration-limit";
        case SolveStatus::continuation_failure: return "continuation-failure";
        case SolveStatus::not_admissible_start: return "not-admissible-start";
        case SolveStatus::linear_solver_failure: return "linear-solver-failure";
    }
    return "unknown";
}

nlohmann::json SolveReport::to_json() const {
    nlohmann::json j{{"status", to_string(status)},
                     {"converged", converged},
                     {"newton_iterations", newton_iterations},
                     {"continuation_ts", continuation_ts},
                     {"total_newton_iterations", total_newton_iterations},
                     {"final_residual", final_residual},
                     {"admissibility_history", admissibility_history},
                     {"detail", detail}};
    if (!ladder.empty()) {
        j["c_estimate"] = c_estimate;
        j["c_eps"] = c_eps;
        j["epsilon_ladder"] = ladder;
    }
    return j;
}

SymMatrix discrete_hessian(const DiscreteField& u, int node) {
    return u.grid->hessian(u.values, node);
}

namespace {

struct NodeState {
    double margin;   // cone margin of the Hessian spectrum
    double value;    // F(D^2 u), valid only when margin > 0
};

/// Cone margins and operator values over all nodes.
void evaluate_nodes(const Grid& g, const Eigen::VectorXd& u, const HessianPair& p,
                    std::vector<NodeState>& out) {
    const int n = g.node_count();
    out.resize(n);
    for (int node = 0; node < n; ++node) {
        const SymMatrix H = g.hessian(u, node);
        const SpectralDecomposition d = eigen_sym(H);
        const ConeMargin cm = gamma_k_membership(d.eigenvalues, p.k);
        out[node].margin = cm.margin;
        if (cm.member) {
            const double sk = elementary_symmetric(d.eigenvalues, p.k);
            const double sl = elementary_symmetric(d.eigenvalues, p.l);
            out[node].value = sk / sl;
        } else {
            const double sk = elementary_symmetric(d.eigenvalues, p.k);
            const double sl = elementary_symmetric(d.eigenvalues, p.l);
            out[node].value = sl != 0.0 ? sk / sl : std::numeric_limits<double>::quiet_NaN();
        }
    }
}

double boundary_coefficient(BoundaryMode mode, double eps) {
    return mode == BoundaryMode::robin ? 1.0 : eps;
}

Eigen::VectorXd residual_from_states(const Grid& g, const Eigen::VectorXd& u,
                                     const std::vector<NodeState>& states,
                                     const Eigen::VectorXd& f, const Eigen::VectorXd& phi,
                                     double bcoef) {
    Eigen::VectorXd r(g.node_count());
    for (int node = 0; node < g.node_count(); ++node) {
        if (g.is_boundary(node))
            r[node] = g.normal_derivative(u, node) + bcoef * u[node] - phi[node];
        else
            r[node] = states[node].value - f[node];
    }
    return r;
}

double min_margin(const std::vector<NodeState>& states, int* argmin = nullptr) {
    double m = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < states.size(); ++i) {
        if (states[i].margin < m) {
            m = states[i].margin;
            if (argmin) *argmin = static_cast<int>(i);
        }
    }
    return m;
}

bool all_admissible(const std::vector<NodeState>& states) {
    for (const auto& s : states)
        if (!(s.margin > 0.0)) return false;
    return true;
}

void check_fields(const DiscreteField& u, const DiscreteField& f, const DiscreteField& phi) {
    if (!u.grid || u.grid != f.grid || u.grid != phi.grid)
        throw std::invalid_argument("pde_solver: fields must share one grid");
    const int n = u.grid->node_count();
    if (u.values.size() != n || f.values.size() != n || phi.values.size() != n)
        throw std::invalid_argument("pde_solver: field size does not match the grid");
}

/// Jacobian row ordering = node ordering.  Boundary rows are the linear Robin
/// operator; interior rows combine the Hessian-term stencils with the current
/// linearization weights F^{ij}.
void assemble_jacobian(const Grid& g, const Eigen::VectorXd& u, const HessianPair& p,
                       double bcoef, Eigen::SparseMatrix<double>& J) {
    using Triplet = Eigen::Triplet<double>;
    std::vector<Triplet> trips;
    trips.reserve(static_cast<std::size_t>(g.node_count()) * 18);
    Grid::Stencil stencil;
    std::vector<std::pair<int, double>> row;
    for (int node = 0; node < g.node_count(); ++node) {
        row.clear();
        const auto push = [&](int col, double w) {
            for (auto& e : row)
                if (e.first == col) {
                    e.second += w;
                    return;
                }
            row.emplace_back(col, w);
        };
        if (g.is_boundary(node)) {
            g.normal_derivative_stencil(node, stencil);
            double sum = 0.0;
            for (const auto& [col, w] : stencil)
                if (col != node) {
                    push(col, w);
                    sum += w;
                }
            push(node, -sum + bcoef);  // balance the derivative part exactly
        } else {
            const SymMatrix H = g.hessian(u, node);
            const SymMatrix Fd = operator_derivative(H, p);
            for (int t = 0; t < g.hessian_terms(); ++t) {
                int rr, cc;
                double factor;
                g.hessian_term_slot(t, rr, cc, factor);
                const double coef = factor * Fd(rr, cc);
                if (coef == 0.0) continue;
                g.hessian_term_stencil(node, t, stencil);
                double sum = 0.0;
                for (const auto& [col, w] : stencil)
                    if (col != node) {
                        push(col, coef * w);
                        sum += w;
                    }
                push(node, -coef * sum);
            }
        }
        for (const auto& [col, w] : row) trips.emplace_back(node, col, w);
    }
    J.resize(g.node_count(), g.node_count());
    J.setFromTriplets(trips.begin(), trips.end());
}

struct NewtonOutcome {
    SolveStatus status = SolveStatus::iteration_limit;
    int iterations = 0;
    double final_residual = 0.0;
    std::vector<double> margins;
    std::string note;
};

NewtonOutcome newton_loop(const Grid& g, Eigen::VectorXd& u, const Eigen::VectorXd& f,
                          const Eigen::VectorXd& phi, const HessianPair& p, double bcoef,
                          const SolverConfig& cfg) {
    NewtonOutcome out;
    std::vector<NodeState> states;
    evaluate_nodes(g, u, p, states);
    if (!all_admissible(states)) {
        out.status = SolveStatus::not_admissible_start;
        return out;
    }
    Eigen::VectorXd r = residual_from_states(g, u, states, f, phi, bcoef);
    double rnorm = r.lpNorm<Eigen::Infinity>();
    out.margins.push_back(min_margin(states));

    Eigen::SparseMatrix<double> J;
    Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
    std::vector<NodeState> trial_states;

    for (int it = 0; it < cfg.max_newton_iterations; ++it) {
        if (rnorm <= cfg.newton_tolerance) {
            out.status = SolveStatus::converged;
            out.final_residual = rnorm;
            return out;
        }
        assemble_jacobian(g, u, p, bcoef, J);
        lu.compute(J);
        if (lu.info() != Eigen::Success) {
            out.status = SolveStatus::linear_solver_failure;
            out.note = "factorization failed";
            out.final_residual = rnorm;
            return out;
        }
        Eigen::VectorXd delta = lu.solve(-r);
        // componentwise backward error |J d + r| / (|J||d| + |r|)
        const auto backward_error = [&](const Eigen::VectorXd& d) {
            const Eigen::VectorXd resid = (J * d + r).cwiseAbs();
            const Eigen::VectorXd scale =
                (J.cwiseAbs() * d.cwiseAbs() + r.cwiseAbs()).cwiseMax(1e-300);
            return (resid.array() / scale.array()).maxCoeff();
        };
        if (backward_error(delta) > 1e-12) {
            // one round of iterative refinement
            delta += lu.solve(-(J * delta + r));
            const double refined = backward_error(delta);
            if (refined > 1e-11) {
                out.status = SolveStatus::linear_solver_failure;
                std::ostringstream os;
                os << "linear backward error " << refined << " after refinement";
                out.note = os.str();
                out.final_residual = rnorm;
                return out;
            }
        }

        double step = 1.0;
        bool accepted = false;
        while (step >= cfg.min_step) {
            Eigen::VectorXd trial = u + step * delta;
            evaluate_nodes(g, trial, p, trial_states);
            if (all_admissible(trial_states)) {
                Eigen::VectorXd tr = residual_from_states(g, trial, trial_states, f, phi, bcoef);
                const double tnorm = tr.lpNorm<Eigen::Infinity>();
                if (tnorm < rnorm) {
                    u = std::move(trial);
                    states = trial_states;
                    r = std::move(tr);
                    rnorm = tnorm;
                    accepted = true;
                    break;
                }
            }
            step *= cfg.backtrack_factor;
        }
        ++out.iterations;
        if (!accepted) {
            out.status = SolveStatus::line_search_failure;
            std::ostringstream os;
            os << "line search stalled at residual " << rnorm << " (iteration " << it << ")";
            out.note = os.str();
            out.final_residual = rnorm;
            return out;
        }
        out.margins.push_back(min_margin(states));
    }
    out.status = (rnorm <= cfg.newton_tolerance) ? SolveStatus::converged
                                                 : SolveStatus::iteration_limit;
    out.final_residual = rnorm;
    return out;
}

}  // namespace

ResidualDiagnostic residual_diagnostic(const DiscreteField& u, const DiscreteField& f,
                                       const DiscreteField& phi, BoundaryMode mode, double eps,
                                       const HessianPair& p) {
    check_fields(u, f, phi);
    const Grid& g = *u.grid;
    std::vector<NodeState> states;
    evaluate_nodes(g, u.values, p, states);
    ResidualDiagnostic diag;
    diag.values = residual_from_states(g, u.values, states, f.values, phi.values,
                                       boundary_coefficient(mode, eps));
    diag.worst_margin = min_margin(states, &diag.worst_node);
    diag.admissible = diag.worst_margin > 0.0;
    return diag;
}

DiscreteField residual(const DiscreteField& u, const DiscreteField& f, const DiscreteField& phi,
                       BoundaryMode mode, double eps, const HessianPair& p) {
    ResidualDiagnostic diag = residual_diagnostic(u, f, phi, mode, eps, p);
    if (!diag.admissible) {
        std::ostringstream os;
        os << "residual: iterate leaves Gamma_" << p.k << " at node " << diag.worst_node
           << " (margin " << diag.worst_margin << ")";
        throw NotAdmissibleError(os.str(), ConeMargin{false, diag.worst_margin});
    }
    return DiscreteField{std::move(diag.values), u.grid};
}

SolveReport newton_solve(const DiscreteField& u0, const DiscreteField& f, const DiscreteField& phi,
                         BoundaryMode mode, double eps, const HessianPair& p,
                         const SolverConfig& cfg) {
    cfg.validate();
    check_fields(u0, f, phi);
    const Grid& g = *u0.grid;
    if (p.n != g.dim()) throw std::invalid_argument("newton_solve: pair dimension != grid dimension");

    SolveReport rep;
    Eigen::VectorXd u = u0.values;
    NewtonOutcome out = newton_loop(g, u, f.values, phi.values, p,
                                    boundary_coefficient(mode, eps), cfg);
    rep.status = out.status;
    rep.converged = out.status == SolveStatus::converged;
    rep.newton_iterations = {out.iterations};
    rep.total_newton_iterations = out.iterations;
    rep.final_residual = out.final_residual;
    rep.admissibility_history = out.margins;
    rep.solution = DiscreteField{std::move(u), &g};
    if (!rep.converged) rep.detail = "newton: " + to_string(out.status);
    return rep;
}

SolveReport solve_homotopy(const Grid& grid, const ScalarField& f, const ScalarField& phi,
                           BoundaryMode mode, double eps, const HessianPair& p,
                           const SolverConfig& cfg) {
    cfg.validate();
    if (p.n != grid.dim())
        throw std::invalid_argument("solve_homotopy: pair dimension != grid dimension");
    const double bcoef = boundary_coefficient(mode, eps);

    Eigen::VectorXd f_target = grid.sample(f);
    Eigen::VectorXd phi_target = grid.sample(phi);
    double sup_f = -std::numeric_limits<double>::infinity();
    for (int node = 0; node < grid.node_count(); ++node) {
        if (!grid.is_boundary(node)) sup_f = std::max(sup_f, f_target[node]);
        if (!(f_target[node] > 0.0) && !grid.is_boundary(node))
            throw std::invalid_argument("solve_homotopy: f must be positive on the domain");
    }

    // Quadratic start u0 = A|x|^2 with F(D^2 u0) = sup f, solved exactly at t=0.
    const double A =
        0.5 * std::pow(binomial(p.n, p.l) / binomial(p.n, p.k) * sup_f, 1.0 / (p.k - p.l));
    const double f0 = binomial(p.n, p.k) / binomial(p.n, p.l) * std::pow(2.0 * A, p.k - p.l);
    Eigen::VectorXd u(grid.node_count());
    Eigen::VectorXd phi0(grid.node_count());
    for (int node = 0; node < grid.node_count(); ++node) {
        const Eigen::VectorXd x = grid.position(node);
        u[node] = A * x.squaredNorm();
        phi0[node] = 0.0;
        if (grid.is_boundary(node)) {
            const Eigen::VectorXd nu = grid.boundary_normal(node);
            phi0[node] = 2.0 * A * x.dot(nu) + bcoef * u[node];
        }
    }

    SolveReport rep;
    rep.solution.grid = &grid;
    // The iterate is carried as u = w + shift with w kept near zero mean.  For
    // the epsilon boundary operator the solution grows like 1/eps, and feeding
    // such values to the stencils would put their storage quantization above
    // the Newton tolerance; the constant rides in `shift` at full precision
    // and only eps*shift enters the boundary rows.
    double shift = 0.0;
    double t = 0.0, dt = cfg.initial_dt;
    bool first = true;
    while (true) {
        const double t_next = first ? 0.0 : std::min(1.0, t + dt);
        Eigen::VectorXd f_t = (1.0 - t_next) * Eigen::VectorXd::Constant(grid.node_count(), f0) +
                              t_next * f_target;
        Eigen::VectorXd phi_t = (1.0 - t_next) * phi0 + t_next * phi_target;
        phi_t.array() -= bcoef * shift;
        Eigen::VectorXd u_trial = u;
        NewtonOutcome out = newton_loop(grid, u_trial, f_t, phi_t, p, bcoef, cfg);
        if (out.status == SolveStatus::converged) {
            u = std::move(u_trial);
            const double mean_w = u.mean();
            u.array() -= mean_w;
            shift += mean_w;
            rep.continuation_ts.push_back(t_next);
            rep.newton_iterations.push_back(out.iterations);
            rep.total_newton_iterations += out.iterations;
            rep.final_residual = out.final_residual;
            for (double m : out.margins) rep.admissibility_history.push_back(m);
            t = t_next;
            if (first) {
                first = false;
            } else if (out.iterations <= 3) {
                dt = std::min(cfg.dt_growth * dt, 1.0);
            }
            if (t >= 1.0) {
                rep.status = SolveStatus::converged;
                rep.converged = true;
                break;
            }
        } else {
            rep.total_newton_iterations += out.iterations;
            if (first) {
                rep.status = out.status;
                rep.detail = "homotopy: start failed, " + to_string(out.status) + "; " + out.note;
                break;
            }
            dt *= 0.5;
            if (dt < cfg.dt_floor) {
                rep.status = SolveStatus::continuation_failure;
                std::ostringstream os;
                os << "homotopy: step floor reached at t=" << t << " (" << to_string(out.status)
                   << "; " << out.note << ")";
                rep.detail = os.str();
                break;
            }
        }
    }
    rep.solution.values = std::move(u);
    rep.solution.values.array() += shift;
    return rep;
}

double field_mean(const DiscreteField& u) {
    const Grid& g = *u.grid;
    double acc = 0.0;
    for (int node = 0; node < g.node_count(); ++node) acc += g.quad_weight(node) * u.values[node];
    return acc / g.volume();
}

SolveReport solve_classical_neumann(const Grid& grid, const ScalarField& f, const ScalarField& phi,
                                    const HessianPair& p, const SolverConfig& cfg) {
    cfg.validate();
    if (convexity_class(grid.domain(), grid.dim(), 256) != ConvexityClass::strictly_convex_for_k)
        throw std::invalid_argument("solve_classical_neumann: domain must be strictly convex");
    if (cfg.epsilon_ladder.empty())
        throw std::invalid_argument("solve_classical_neumann: empty epsilon ladder");

    SolveReport rep;
    rep.ladder = cfg.epsilon_ladder;
    for (double eps : cfg.epsilon_ladder) {
        SolveReport sub = solve_homotopy(grid, f, phi, BoundaryMode::epsilon, eps, p, cfg);
        rep.newton_iterations.insert(rep.newton_iterations.end(), sub.newton_iterations.begin(),
                                     sub.newton_iterations.end());
        rep.total_newton_iterations += sub.total_newton_iterations;
        for (double m : sub.admissibility_history) rep.admissibility_history.push_back(m);
        if (!sub.converged) {
            rep.status = sub.status;
            rep.detail = "classical: ladder solve failed at eps=" + std::to_string(eps) + "; " +
                         sub.detail;
            return rep;
        }
        const double mean = field_mean(sub.solution);
        rep.c_eps.push_back(-eps * mean);
        rep.final_residual = sub.final_residual;
        rep.solution.grid = &grid;
        rep.solution.values = sub.solution.values.array() - mean;
    }
    const std::size_t m = rep.c_eps.size();
    if (m == 1) {
        rep.c_estimate = rep.c_eps[0];
    } else {
        // linear Richardson step from the two smallest epsilons
        const double e1 = rep.ladder[m - 2], e2 = rep.ladder[m - 1];
        const double c1 = rep.c_eps[m - 2], c2 = rep.c_eps[m - 1];
        rep.c_estimate = (e1 * c2 - e2 * c1) / (e1 - e2);
    }
    rep.status = SolveStatus::converged;
    rep.converged = true;
    return rep;
}

void write_solution_csv(std::ostream& os, const DiscreteField& u, const DiscreteField& f,
                        const DiscreteField& phi, BoundaryMode mode, double eps,
                        const HessianPair& p) {
    const Grid& g = *u.grid;
    const ResidualDiagnostic diag = residual_diagnostic(u, f, phi, mode, eps, p);
    os << "node";
    for (int d = 0; d < g.dim(); ++d) os << ",x" << (d + 1);
    os << ",u,grad_norm";
    for (int d = 0; d < g.dim(); ++d) os << ",eig" << (d + 1);
    os << ",residual,boundary\n";
    os.precision(17);
    for (int node = 0; node < g.node_count(); ++node) {
        const Eigen::VectorXd x = g.position(node);
        const Eigen::VectorXd grad = g.gradient(u.values, node);
        const Spectrum ev = eigen_sym(g.hessian(u.values, node)).eigenvalues;
        os << node;
        for (int d = 0; d < g.dim(); ++d) os << "," << x[d];
        os << "," << u.values[node] << "," << grad.norm();
        for (int d = 0; d < g.dim(); ++d) os << "," << ev[d];
        os << "," << diag.values[node] << "," << (g.is_boundary(node) ? 1 : 0) << "\n";
    }
}

}  // namespace hessquot
