#pragma once

#include <Eigen/Dense>

#include <span>
#include <stdexcept>
#include <string>

namespace hessquot {

/// An eigenvalue vector lambda in R^n.  Entries are kept in whatever order the
/// caller supplies; the symmetric-function routines never assume sortedness.
class Spectrum {
public:
    explicit Spectrum(Eigen::VectorXd values);

    int dim() const noexcept { return static_cast<int>(values_.size()); }
    double operator[](int i) const { return values_[i]; }
    const Eigen::VectorXd& values() const noexcept { return values_; }

private:
    Eigen::VectorXd values_;
};

/// The index pair (k, l) selecting the quotient sigma_k / sigma_l in dimension n.
/// Requires 0 <= l < k <= n.
struct HessianPair {
    int k;
    int l;
    int n;
    HessianPair(int k, int l, int n);
};

/// Cone-membership verdict for the Garding cone Gamma_k together with the
/// normalized slack min_{1<=i<=k} sigma_i(lambda) / C(n,i).  Membership is the
/// strict inequality margin > 0; callers wanting a tolerance apply it to the
/// margin themselves.
struct ConeMargin {
    bool member = false;
    double margin = 0.0;
};

class NotAdmissibleError : public std::domain_error {
public:
    NotAdmissibleError(const std::string& what, ConeMargin margin)
        : std::domain_error(what), margin_(margin) {}
    ConeMargin margin() const noexcept { return margin_; }

private:
    ConeMargin margin_;
};

/// C(n,k) as a double; 0 outside the valid range.
double binomial(int n, int k);

/// sigma_m of lambda with the entries at `excluded` (0-based, distinct, at most
/// two) set to zero.  Evaluated by the coefficient recurrence over
/// prod_i (t + lambda_i), O(n*m); sigma_0 = 1.
double elementary_symmetric(const Spectrum& lambda, int m,
                            std::span<const int> excluded = {});

/// Component i equals sigma_{m-1}(lambda | i): the gradient of sigma_m at a
/// diagonal matrix.  Requires 1 <= m <= n.
Eigen::VectorXd sigma_gradient(const Spectrum& lambda, int m);

ConeMargin gamma_k_membership(const Spectrum& lambda, int k);

/// sigma_k(lambda) / sigma_l(lambda).  Throws NotAdmissibleError carrying the
/// cone margin when lambda is outside Gamma_k.
double hessian_quotient(const Spectrum& lambda, const HessianPair& p);

/// Componentwise derivative of the quotient,
///   g_i = [sigma_{k-1}(lambda|i) sigma_l - sigma_k sigma_{l-1}(lambda|i)] / sigma_l^2,
/// strictly positive on Gamma_k (ellipticity).
Eigen::VectorXd hessian_quotient_gradient(const Spectrum& lambda, const HessianPair& p);

struct MaclaurinSides {
    double lhs = 0.0;
    double rhs = 0.0;
};

/// Normalized ratio means [ (sigma_k/C(n,k)) / (sigma_l/C(n,l)) ]^{1/(k-l)} for
/// the pair (k,l) against the pair (r,s).  Contract on Gamma_k with
/// k > l >= 0, r > s >= 0, k >= r, l >= s: lhs <= rhs.
MaclaurinSides newton_maclaurin(const Spectrum& lambda, int k, int l, int r, int s);

}  // namespace hessquot
