#pragma once

#include "hessquot/pde_solver.hpp"

#include <json.hpp>

#include <string>
#include <vector>

namespace hessquot {

/// Explicit sup-norm bound read off the comparison argument:
///   A  = (1/2) [C(n,l)/C(n,k) * sup f]^{1/(k-l)}
///   M0 = max(max|phi|, max|phi| + 2 A diam + A diam^2)
struct AprioriBounds {
    double M0 = 0.0;
    double A = 0.0;
    double diam = 0.0;
    double max_abs_phi = 0.0;

    static AprioriBounds c0_bound(double sup_f, double max_abs_phi, const Domain& dom,
                                  const HessianPair& p);
};

struct AuditReport {
    bool c0_ok = false;
    bool admissible_everywhere = false;
    bool boundary_identity_ok = false;
    bool max_at_boundary_ok = false;
    double c0_margin = 0.0;                 // M0 - max|u|
    double admissibility_margin = 0.0;      // min cone margin over nodes
    double boundary_identity_margin = 0.0;  // tolerance - worst defect
    double max_at_boundary_margin = 0.0;    // max_boundary u - max_all u

    bool passed() const {
        return c0_ok && admissible_everywhere && boundary_identity_ok && max_at_boundary_ok;
    }
    nlohmann::json to_json() const;
};

/// Checks a converged solution against the bound, cone admissibility at every
/// node, the boundary splitting |Du|^2 = |(Du)'|^2 + u_nu^2 (to 1e-8), and
/// boundary attainment of max u.
AuditReport audit_solution(const DiscreteField& u, const HessianPair& p,
                           const AprioriBounds& bounds);

struct EpsilonStudyRow {
    double eps = 0.0;
    double sup_eps_u = 0.0;
    double sup_grad = 0.0;
    double sup_hess = 0.0;
    double c_eps = 0.0;
    bool solved = false;
};

struct EpsilonStudy {
    std::vector<EpsilonStudyRow> rows;
    bool all_solved = false;
    // max/median of each column; uniformity asks each to stay below 2
    double spread_eps_u = 0.0, spread_grad = 0.0, spread_hess = 0.0;
    bool uniform_ok = false;
    double m0_bound = 0.0;     // bound for sup|eps u|
    bool eps_u_within_m0 = false;
};

/// Solves the ladder and measures sup|eps u|, sup|Du|, sup|D^2 u| from the
/// solver's own stencils; uniform_ok when every column varies by less than 2x
/// around its median.
EpsilonStudy epsilon_uniformity_study(const Grid& grid, const ScalarField& f,
                                      const ScalarField& phi, const HessianPair& p,
                                      const SolverConfig& cfg);
void write_epsilon_study_csv(std::ostream& os, const EpsilonStudy& study);

/// A problem with a known exact solution used for error measurement.
struct ManufacturedCase {
    std::string id;
    int k = 2, l = 0;
    Domain domain;
    ScalarField f;
    ScalarField phi;
    ScalarField exact;
    bool quadratic = false;  // reproduced exactly by the stencils
};

const std::vector<ManufacturedCase>& manufactured_catalog();
const ManufacturedCase* find_manufactured(const std::string& id);

struct ConvergenceRow {
    int n_radial = 0;
    int n_angular = 0;
    double h = 0.0;
    double max_error = 0.0;
    double observed_order = 0.0;  // NaN on the coarsest row / exact cases
    bool solved = false;
};

struct ConvergenceStudy {
    std::vector<ConvergenceRow> rows;
    bool all_solved = false;
    bool stencil_exact = false;  // errors at rounding level; order not applicable
    double min_order = 0.0;
};

/// Errors against the exact solution across dyadic refinements starting from
/// (base_radial x base_angular); order = log2(e_h / e_{h/2}).  The Newton
/// tolerance is relaxed with the cube of the refinement factor to stay above
/// the stencil roundoff floor near the pole.
ConvergenceStudy convergence_study(const ManufacturedCase& mc, int base_radial, int base_angular,
                                   int refinements, const SolverConfig& cfg);
void write_convergence_csv(std::ostream& os, const ConvergenceStudy& study);

/// Discrete max-norm error of a solve against a reference function.
double max_error_against(const DiscreteField& u, const ScalarField& exact);

/// Comparison check: the minimum of u - A|x|^2 over the grid sits on the boundary.
bool comparison_min_on_boundary(const DiscreteField& u, const AprioriBounds& bounds);

}  // namespace hessquot
