#pragma once

#include "hessquot/domain_geometry.hpp"
#include "hessquot/spectral_operator.hpp"

#include <Eigen/Dense>

#include <functional>
#include <utility>
#include <vector>

namespace hessquot {

/// Boundary-fitted curvilinear grid over a catalog domain.
///
/// Disk and ellipse use the stretched polar chart x = a*rho*cos(th),
/// y = b*rho*sin(th) with rho in [0,1]; the ball uses spherical coordinates
/// (r, th) for fields with azimuthal symmetry, th in [0,pi] measured from the
/// +z axis, so its nodes live in the meridian plane (s, 0, z).
///
/// Radial derivatives use polynomial central/one-sided stencils.  Angular
/// derivatives use five-point stencils fitted to differentiate Fourier modes
/// 0..2 exactly; combined with the exact chain-rule factors this makes every
/// Cartesian quadratic reproduce its Hessian to rounding, including at the
/// pole, where Hessian and gradient come from ring Fourier/cosine fits.
class Grid {
public:
    Grid(const Domain& dom, int n_radial, int n_angular);

    const Domain& domain() const noexcept { return dom_; }
    bool axisymmetric() const noexcept { return ball_; }
    int dim() const noexcept { return ball_ ? 3 : 2; }
    int n_radial() const noexcept { return nr_; }
    int n_angular() const noexcept { return nth_; }
    int node_count() const noexcept { return n_nodes_; }
    int pole_node() const noexcept { return 0; }
    bool is_boundary(int node) const;
    int boundary_count() const noexcept { return ball_ ? nth_ + 1 : nth_; }

    int node_index(int i, int j) const;  // wraps (polar) / reflects (ball) j
    std::pair<int, int> node_coords(int node) const;

    Eigen::VectorXd position(int node) const;
    Eigen::VectorXd boundary_normal(int node) const;
    double quad_weight(int node) const;
    double volume() const noexcept { return volume_; }
    double radial_step() const noexcept { return hr_; }

    using Entry = std::pair<int, double>;
    using Stencil = std::vector<Entry>;

    /// Independent Hessian entries fed by per-node stencils: (row, col, factor)
    /// where factor is 1 for diagonal slots and 2 for the off-diagonal slot.
    int hessian_terms() const noexcept { return ball_ ? 4 : 3; }
    void hessian_term_slot(int term, int& row, int& col, double& factor) const;
    void hessian_term_stencil(int node, int term, Stencil& out) const;
    void gradient_stencil(int node, int axis, Stencil& out) const;
    void normal_derivative_stencil(int node, Stencil& out) const;  // boundary nodes

    /// Applies a stencil in deviation form sum w_q (u_q - u_center), which all
    /// derivative stencils permit since they annihilate constants.
    double apply(const Stencil& s, const Eigen::VectorXd& u, int center) const;

    SymMatrix hessian(const Eigen::VectorXd& u, int node) const;
    Eigen::VectorXd gradient(const Eigen::VectorXd& u, int node) const;
    double normal_derivative(const Eigen::VectorXd& u, int node) const;

    Eigen::VectorXd sample(const std::function<double(const Eigen::VectorXd&)>& f) const;

private:
    Domain dom_;
    bool ball_;
    int nr_, nth_;
    int n_nodes_;
    double hr_, hth_;
    double a_, b_;  // chart scales (ball: 1, 1 with rho in [0, R])
    double rho_max_;
    double volume_;
    // fitted angular weights
    double d1_alpha_, d1_beta_;        // +-1, +-2 antisymmetric
    double d2_w0_, d2_a_, d2_b_;       // center, +-1, +-2

    struct ChartOps {
        Stencil d1r, d2r, d1t, d2t, d1rt;
    };
    void chart_ops(int i, int j, ChartOps& ops) const;
    void accumulate(Stencil& s, int node, double w) const;
    void combine(const ChartOps& ops, const double* coeff, Stencil& out) const;
    void pole_hessian_stencil(int term, Stencil& out) const;
    void pole_gradient_stencil(int axis, Stencil& out) const;
    void azimuthal_term_stencil(int i, int j, Stencil& out) const;
};

}  // namespace hessquot
