#pragma once

#include "hessquot/spectral_operator.hpp"

#include <Eigen/Dense>

#include <stdexcept>

namespace hessquot {

class OutOfDomainError : public std::domain_error {
    using std::domain_error::domain_error;
};
class OutOfCollarError : public std::domain_error {
    using std::domain_error::domain_error;
};

enum class DomainKind { disk, ellipse, ball, superellipse };

/// A smooth convex domain from the closed catalog, centered at the origin.
/// Planar boundaries are the radial curves r(phi):
///   disk / ellipse / superellipse:  (x/a)^p + (y/b)^p = 1  (p = 2 except
///   superellipse, where p >= 4 is even), parametrized by the polar angle.
/// The ball is the n = 3 member.
class Domain {
public:
    static Domain disk(double radius);
    static Domain ellipse(double a, double b);
    static Domain ball(double radius);
    static Domain superellipse(double a, double b, int p);

    DomainKind kind() const noexcept { return kind_; }
    int dim() const noexcept { return kind_ == DomainKind::ball ? 3 : 2; }
    double semi_axis_a() const noexcept { return a_; }
    double semi_axis_b() const noexcept { return b_; }
    int exponent() const noexcept { return p_; }
    double diameter() const noexcept { return diameter_; }
    /// Collar width mu: half the smallest boundary curvature radius, capped at
    /// a tenth of the diameter, so the distance function stays smooth on the collar.
    double collar_width() const noexcept { return collar_; }

    bool contains(const Eigen::VectorXd& x) const;  // closure membership

    /// Boundary point, tangent data and curvature of the planar radial curve;
    /// for the ball, phi is the meridian angle from the +z axis.
    void radial_curve(double phi, double& r, double& dr, double& ddr) const;

private:
    Domain(DomainKind kind, double a, double b, int p);
    DomainKind kind_;
    double a_, b_;
    int p_;
    double diameter_, collar_;
};

/// dist(x, boundary) for x in the closure; 0 exactly on the boundary.
/// Closed form for disk/ball, foot-point projection onto the parametrized
/// boundary otherwise (coarse scan + Newton refinement to 1e-12).
double signed_distance(const Domain& dom, const Eigen::VectorXd& x);

/// Parameter of the nearest boundary point of a planar domain.
double foot_parameter(const Domain& dom, const Eigen::VectorXd& x);

/// The outward unit normal field extended inward by nu = -grad d; defined on
/// the collar {d < mu} and equal to the outward normal on the boundary.
Eigen::VectorXd normal_extension(const Domain& dom, const Eigen::VectorXd& x);

/// Projector onto the tangent plane of a unit vector: c = I - nu nu^T.
SymMatrix tangential_projector(const Eigen::VectorXd& nu);

struct BoundaryPoint {
    Eigen::VectorXd position;
    Eigen::VectorXd outward_normal;
    Eigen::VectorXd curvatures;  // principal curvatures w.r.t. the inner normal
};

/// Curvature data at the boundary parameter (planar: polar angle; ball: any
/// meridian angle, curvatures are (1/R, 1/R)).
BoundaryPoint boundary_curvatures(const Domain& dom, double phi);

enum class ConvexityClass { strictly_convex_for_k, convex_only, neither };

/// Classifies the boundary by sampling principal curvatures: strictly
/// (k-1)-convex (kappa in Gamma_{k-1} at every sample) and convex, convex
/// only, or neither.
ConvexityClass convexity_class(const Domain& dom, int k, int boundary_samples);

/// h(x) = -d(x) + d(x)^2 on the collar; nonpositive there.
double h_barrier(const Domain& dom, const Eigen::VectorXd& x);

}  // namespace hessquot
