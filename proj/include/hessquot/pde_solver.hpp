#pragma once

#include "hessquot/grid.hpp"

#include <json.hpp>

#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

namespace hessquot {

/// Grid-indexed scalar field.
struct DiscreteField {
    Eigen::VectorXd values;
    const Grid* grid = nullptr;
};

struct SolverConfig {
    double newton_tolerance = 1e-10;  // max-norm residual
    int max_newton_iterations = 50;
    double backtrack_factor = 0.5;
    double min_step = 9.5367431640625e-07;  // 2^-20
    double initial_dt = 0.1;
    double dt_growth = 1.5;
    double dt_floor = 1e-4;
    std::vector<double> epsilon_ladder = {1e-1, 3e-2, 1e-2, 3e-3, 1e-3};

    void validate() const;
};

/// Boundary operator: robin is u_nu + u = phi, epsilon is u_nu + eps*u = phi.
enum class BoundaryMode { robin, epsilon };

enum class SolveStatus {
    converged,
    line_search_failure,
    iteration_limit,
    continuation_failure,
    not_admissible_start,
    linear_solver_failure,
};

std::string to_string(SolveStatus s);

struct SolveReport {
    SolveStatus status = SolveStatus::iteration_limit;
    bool converged = false;
    std::vector<int> newton_iterations;   // per continuation step
    std::vector<double> continuation_ts;  // accepted t values
    int total_newton_iterations = 0;
    double final_residual = 0.0;
    std::vector<double> admissibility_history;  // min cone margin per accepted iterate
    double c_estimate = 0.0;                    // classical mode
    std::vector<double> c_eps;                  // per-ladder -eps * mean(u_eps)
    std::vector<double> ladder;
    DiscreteField solution;
    std::string detail;

    nlohmann::json to_json() const;
};

using ScalarField = std::function<double(const Eigen::VectorXd&)>;

/// Cartesian Hessian of the grid function at one node (one-sided radial
/// closure on the boundary ring).
SymMatrix discrete_hessian(const DiscreteField& u, int node);

struct ResidualDiagnostic {
    Eigen::VectorXd values;  // quotient residual inside, boundary operator residual on the rim
    bool admissible = true;
    int worst_node = -1;
    double worst_margin = 0.0;
};

/// Best-effort residual that reports inadmissible nodes instead of throwing;
/// entries where sigma_l vanishes come out non-finite.
ResidualDiagnostic residual_diagnostic(const DiscreteField& u, const DiscreteField& f,
                                       const DiscreteField& phi, BoundaryMode mode, double eps,
                                       const HessianPair& p);

/// Residual field; throws NotAdmissibleError naming the worst node when the
/// iterate leaves the cone.
DiscreteField residual(const DiscreteField& u, const DiscreteField& f, const DiscreteField& phi,
                       BoundaryMode mode, double eps, const HessianPair& p);

/// Damped Newton with admissibility backtracking from an admissible start.
SolveReport newton_solve(const DiscreteField& u0, const DiscreteField& f, const DiscreteField& phi,
                         BoundaryMode mode, double eps, const HessianPair& p,
                         const SolverConfig& cfg);

/// Continuation in the data from the exactly-solvable quadratic start
/// u0 = A|x|^2 (A matched to sup f) to the target (f, phi).
SolveReport solve_homotopy(const Grid& grid, const ScalarField& f, const ScalarField& phi,
                           BoundaryMode mode, double eps, const HessianPair& p,
                           const SolverConfig& cfg);

/// Classical Neumann data (u_nu = c + phi) via the vanishing-eps limit:
/// solves the eps ladder, extrapolates c from c_eps = -eps*mean(u_eps), and
/// returns the mean-normalized solution at the smallest eps.
SolveReport solve_classical_neumann(const Grid& grid, const ScalarField& f, const ScalarField& phi,
                                    const HessianPair& p, const SolverConfig& cfg);

double field_mean(const DiscreteField& u);

/// CSV dump: node index, coordinates, u, |Du|, Hessian eigenvalues, residual.
void write_solution_csv(std::ostream& os, const DiscreteField& u, const DiscreteField& f,
                        const DiscreteField& phi, BoundaryMode mode, double eps,
                        const HessianPair& p);

}  // namespace hessquot
