#include "hessquot/domain_geometry.hpp"

#include <algorithm>
#include <cmath>

namespace hessquot {

namespace {

constexpr double kFootTol = 1e-12;

double ipow(double x, int p) {
    double r = 1.0;
    for (int i = 0; i < p; ++i) r *= x;
    return r;
}

double curvature_from_radial(double r, double dr, double ddr) {
    const double g = r * r + dr * dr;
    return (r * r + 2.0 * dr * dr - r * ddr) / (g * std::sqrt(g));
}

}  // namespace

Domain::Domain(DomainKind kind, double a, double b, int p) : kind_(kind), a_(a), b_(b), p_(p) {
    if (!(a > 0.0 && b > 0.0)) throw std::invalid_argument("Domain: semi-axes must be positive");
    if (kind == DomainKind::superellipse && (p < 2 || p % 2 != 0))
        throw std::invalid_argument("Domain: superellipse exponent must be even and >= 2");
    diameter_ = 2.0 * std::max(a_, b_);
    double kappa_max = 1.0 / a_;
    switch (kind_) {
        case DomainKind::disk:
        case DomainKind::ball:
            kappa_max = 1.0 / a_;
            break;
        case DomainKind::ellipse:
            kappa_max = std::max(a_ / (b_ * b_), b_ / (a_ * a_));
            break;
        case DomainKind::superellipse: {
            kappa_max = 0.0;
            for (int j = 0; j < 512; ++j) {
                double r, dr, ddr;
                radial_curve(2.0 * M_PI * j / 512, r, dr, ddr);
                kappa_max = std::max(kappa_max, curvature_from_radial(r, dr, ddr));
            }
            break;
        }
    }
    collar_ = std::min(0.5 / kappa_max, 0.1 * diameter_);
}

Domain Domain::disk(double radius) { return Domain(DomainKind::disk, radius, radius, 2); }
Domain Domain::ellipse(double a, double b) { return Domain(DomainKind::ellipse, a, b, 2); }
Domain Domain::ball(double radius) { return Domain(DomainKind::ball, radius, radius, 2); }
Domain Domain::superellipse(double a, double b, int p) {
    return Domain(DomainKind::superellipse, a, b, p);
}

bool Domain::contains(const Eigen::VectorXd& x) const {
    if (x.size() != dim()) throw std::invalid_argument("Domain::contains: dimension mismatch");
    if (kind_ == DomainKind::ball || kind_ == DomainKind::disk)
        return x.norm() <= a_ * (1.0 + 1e-12);
    const double level = ipow(x[0] / a_, p_) + ipow(x[1] / b_, p_);
    return level <= 1.0 + 1e-10;
}

void Domain::radial_curve(double phi, double& r, double& dr, double& ddr) const {
    if (kind_ == DomainKind::disk || kind_ == DomainKind::ball) {
        r = a_;
        dr = 0.0;
        ddr = 0.0;
        return;
    }
    // r(phi) = w(phi)^{-1/p} with w = cos^p/a^p + sin^p/b^p (p even)
    const double c = std::cos(phi), s = std::sin(phi);
    const double ap = ipow(a_, p_), bp = ipow(b_, p_);
    const double ca = ipow(c, p_) / ap;
    const double sb = ipow(s, p_) / bp;
    const double w = ca + sb;
    const double cpm1 = ipow(c, p_ - 1), spm1 = ipow(s, p_ - 1);
    const double cpm2 = ipow(c, p_ - 2), spm2 = ipow(s, p_ - 2);
    const double dw = p_ * (-s * cpm1 / ap + c * spm1 / bp);
    const double ddw = p_ * ((p_ - 1) * s * s * cpm2 / ap - ca +
                             (p_ - 1) * c * c * spm2 / bp - sb);
    const double inv_p = 1.0 / p_;
    r = std::pow(w, -inv_p);
    dr = -inv_p * std::pow(w, -inv_p - 1.0) * dw;
    ddr = -inv_p * ((-inv_p - 1.0) * std::pow(w, -inv_p - 2.0) * dw * dw +
                    std::pow(w, -inv_p - 1.0) * ddw);
}

namespace {

Eigen::Vector2d curve_point(const Domain& dom, double phi) {
    double r, dr, ddr;
    dom.radial_curve(phi, r, dr, ddr);
    return {r * std::cos(phi), r * std::sin(phi)};
}

Eigen::Vector2d curve_tangent(const Domain& dom, double phi) {
    double r, dr, ddr;
    dom.radial_curve(phi, r, dr, ddr);
    const double c = std::cos(phi), s = std::sin(phi);
    return {dr * c - r * s, dr * s + r * c};
}

Eigen::Vector2d curve_second(const Domain& dom, double phi) {
    double r, dr, ddr;
    dom.radial_curve(phi, r, dr, ddr);
    const double c = std::cos(phi), s = std::sin(phi);
    return {(ddr - r) * c - 2.0 * dr * s, (ddr - r) * s + 2.0 * dr * c};
}

}  // namespace

double foot_parameter(const Domain& dom, const Eigen::VectorXd& x) {
    if (dom.dim() != 2) throw std::invalid_argument("foot_parameter: planar domains only");
    // Coarse scan for the global minimum, then Newton on (x - q) . q' = 0.
    double best_phi = 0.0;
    double best_d2 = std::numeric_limits<double>::infinity();
    constexpr int kScan = 64;
    for (int j = 0; j < kScan; ++j) {
        const double phi = 2.0 * M_PI * j / kScan;
        const double d2 = (Eigen::Vector2d(x) - curve_point(dom, phi)).squaredNorm();
        if (d2 < best_d2) {
            best_d2 = d2;
            best_phi = phi;
        }
    }
    double phi = best_phi;
    for (int it = 0; it < 50; ++it) {
        const Eigen::Vector2d q = curve_point(dom, phi);
        const Eigen::Vector2d t = curve_tangent(dom, phi);
        const Eigen::Vector2d q2 = curve_second(dom, phi);
        const Eigen::Vector2d res = Eigen::Vector2d(x) - q;
        const double g = res.dot(t);
        const double gp = -t.squaredNorm() + res.dot(q2);
        if (gp == 0.0) break;
        double step = -g / gp;
        step = std::clamp(step, -0.5, 0.5);
        phi += step;
        if (std::abs(step) * t.norm() < kFootTol) break;
    }
    return phi;
}

double signed_distance(const Domain& dom, const Eigen::VectorXd& x) {
    if (!dom.contains(x)) throw OutOfDomainError("signed_distance: point outside the closure");
    if (dom.kind() == DomainKind::disk || dom.kind() == DomainKind::ball)
        return dom.semi_axis_a() - x.norm();
    const double phi = foot_parameter(dom, x);
    return (Eigen::Vector2d(x) - curve_point(dom, phi)).norm();
}

Eigen::VectorXd normal_extension(const Domain& dom, const Eigen::VectorXd& x) {
    const double d = signed_distance(dom, x);
    if (d >= dom.collar_width())
        throw OutOfCollarError("normal_extension: point outside the boundary collar");
    if (dom.kind() == DomainKind::disk || dom.kind() == DomainKind::ball) {
        return x / x.norm();  // collar excludes the center
    }
    const double phi = foot_parameter(dom, x);
    const Eigen::Vector2d q = curve_point(dom, phi);
    if (d > 1e-9) {
        Eigen::Vector2d nu = (q - Eigen::Vector2d(x)) / d;
        return nu;
    }
    // On (or numerically on) the boundary: rotate the tangent outward.
    const Eigen::Vector2d t = curve_tangent(dom, phi).normalized();
    return Eigen::Vector2d(t[1], -t[0]);
}

SymMatrix tangential_projector(const Eigen::VectorXd& nu) {
    if (std::abs(nu.norm() - 1.0) > 1e-10)
        throw std::invalid_argument("tangential_projector: input must be a unit vector");
    const int n = static_cast<int>(nu.size());
    return SymMatrix(Eigen::MatrixXd::Identity(n, n) - nu * nu.transpose());
}

BoundaryPoint boundary_curvatures(const Domain& dom, double phi) {
    BoundaryPoint bp;
    if (dom.dim() == 3) {
        const double R = dom.semi_axis_a();
        bp.position = Eigen::Vector3d(R * std::sin(phi), 0.0, R * std::cos(phi));
        bp.outward_normal = bp.position / R;
        bp.curvatures = Eigen::Vector2d(1.0 / R, 1.0 / R);
        return bp;
    }
    double r, dr, ddr;
    dom.radial_curve(phi, r, dr, ddr);
    bp.position = curve_point(dom, phi);
    const Eigen::Vector2d t = curve_tangent(dom, phi).normalized();
    bp.outward_normal = Eigen::Vector2d(t[1], -t[0]);
    bp.curvatures = Eigen::VectorXd::Constant(1, curvature_from_radial(r, dr, ddr));
    return bp;
}

ConvexityClass convexity_class(const Domain& dom, int k, int boundary_samples) {
    if (k < 1) throw std::invalid_argument("convexity_class: k must be >= 1");
    bool strict = true;
    bool convex = true;
    const double span = (dom.dim() == 3) ? M_PI : 2.0 * M_PI;
    for (int j = 0; j < boundary_samples; ++j) {
        const BoundaryPoint bp = boundary_curvatures(dom, span * j / boundary_samples);
        if (bp.curvatures.minCoeff() < 0.0) convex = false;
        if (k >= 2) {
            // kappa has n-1 entries; strict (k-1)-convexity asks kappa in Gamma_{k-1}
            const int kk = std::min(k - 1, static_cast<int>(bp.curvatures.size()));
            if (!gamma_k_membership(Spectrum(bp.curvatures), kk).member) strict = false;
        }
    }
    if (!convex) return ConvexityClass::neither;
    return strict ? ConvexityClass::strictly_convex_for_k : ConvexityClass::convex_only;
}

double h_barrier(const Domain& dom, const Eigen::VectorXd& x) {
    const double d = signed_distance(dom, x);
    if (d >= dom.collar_width())
        throw OutOfCollarError("h_barrier: point outside the boundary collar");
    return -d + d * d;
}

}  // namespace hessquot
