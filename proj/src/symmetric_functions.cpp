#include "hessquot/symmetric_functions.hpp"

#include <algorithm>
#include <array>
#include <cmath>

namespace hessquot {

namespace {

constexpr int kMaxDim = 32;

void check_excluded(const Spectrum& lambda, std::span<const int> excluded) {
    if (excluded.size() > 2)
        throw std::invalid_argument("elementary_symmetric: at most two excluded indices");
    for (std::size_t a = 0; a < excluded.size(); ++a) {
        if (excluded[a] < 0 || excluded[a] >= lambda.dim())
            throw std::invalid_argument("elementary_symmetric: excluded index out of range");
        for (std::size_t b = a + 1; b < excluded.size(); ++b)
            if (excluded[a] == excluded[b])
                throw std::invalid_argument("elementary_symmetric: repeated excluded index");
    }
}

// Coefficients e_0..e_m of prod (t + lambda_i) over the non-excluded entries.
// Skipping an entry is the zeroing convention: the factor degenerates to t.
void esf_table(const Spectrum& lambda, int m, std::span<const int> excluded, double* e) {
    std::fill(e, e + m + 1, 0.0);
    e[0] = 1.0;
    int used = 0;
    for (int i = 0; i < lambda.dim(); ++i) {
        bool skip = false;
        for (int x : excluded) skip = skip || (x == i);
        if (skip) continue;
        ++used;
        const double v = lambda[i];
        for (int j = std::min(m, used); j >= 1; --j) e[j] += v * e[j - 1];
    }
}

}  // namespace

Spectrum::Spectrum(Eigen::VectorXd values) : values_(std::move(values)) {
    if (values_.size() < 1)
        throw std::invalid_argument("Spectrum: dimension must be >= 1");
    if (values_.size() > kMaxDim)
        throw std::invalid_argument("Spectrum: dimension too large");
    if (!values_.allFinite())
        throw std::invalid_argument("Spectrum: entries must be finite");
}

HessianPair::HessianPair(int k_, int l_, int n_) : k(k_), l(l_), n(n_) {
    if (!(0 <= l && l < k && k <= n))
        throw std::invalid_argument("HessianPair: need 0 <= l < k <= n");
}

double binomial(int n, int k) {
    if (k < 0 || k > n) return 0.0;
    k = std::min(k, n - k);
    double r = 1.0;
    for (int i = 1; i <= k; ++i) r = r * static_cast<double>(n - k + i) / static_cast<double>(i);
    return r;
}

double elementary_symmetric(const Spectrum& lambda, int m, std::span<const int> excluded) {
    if (m < 0 || m > lambda.dim())
        throw std::invalid_argument("elementary_symmetric: degree out of range");
    check_excluded(lambda, excluded);
    std::array<double, kMaxDim + 1> e{};
    esf_table(lambda, m, excluded, e.data());
    return e[m];
}

Eigen::VectorXd sigma_gradient(const Spectrum& lambda, int m) {
    const int n = lambda.dim();
    if (m < 1 || m > n)
        throw std::invalid_argument("sigma_gradient: degree out of range");
    Eigen::VectorXd g(n);
    for (int i = 0; i < n; ++i) {
        const int ex[1] = {i};
        g[i] = elementary_symmetric(lambda, m - 1, ex);
    }
    return g;
}

ConeMargin gamma_k_membership(const Spectrum& lambda, int k) {
    const int n = lambda.dim();
    if (k < 1 || k > n)
        throw std::invalid_argument("gamma_k_membership: degree out of range");
    std::array<double, kMaxDim + 1> e{};
    esf_table(lambda, k, {}, e.data());
    double margin = std::numeric_limits<double>::infinity();
    for (int i = 1; i <= k; ++i) margin = std::min(margin, e[i] / binomial(n, i));
    return ConeMargin{margin > 0.0, margin};
}

double hessian_quotient(const Spectrum& lambda, const HessianPair& p) {
    if (lambda.dim() != p.n)
        throw std::invalid_argument("hessian_quotient: dimension mismatch");
    const ConeMargin cm = gamma_k_membership(lambda, p.k);
    if (!cm.member)
        throw NotAdmissibleError("hessian_quotient: spectrum outside Gamma_k", cm);
    std::array<double, kMaxDim + 1> e{};
    esf_table(lambda, p.k, {}, e.data());
    return e[p.k] / e[p.l];
}

Eigen::VectorXd hessian_quotient_gradient(const Spectrum& lambda, const HessianPair& p) {
    if (lambda.dim() != p.n)
        throw std::invalid_argument("hessian_quotient_gradient: dimension mismatch");
    const ConeMargin cm = gamma_k_membership(lambda, p.k);
    if (!cm.member)
        throw NotAdmissibleError("hessian_quotient_gradient: spectrum outside Gamma_k", cm);
    const int n = lambda.dim();
    const double sk = elementary_symmetric(lambda, p.k);
    const double sl = elementary_symmetric(lambda, p.l);
    Eigen::VectorXd g(n);
    for (int i = 0; i < n; ++i) {
        const int ex[1] = {i};
        const double skm1 = elementary_symmetric(lambda, p.k - 1, ex);
        const double slm1 = (p.l >= 1) ? elementary_symmetric(lambda, p.l - 1, ex) : 0.0;
        g[i] = (skm1 * sl - sk * slm1) / (sl * sl);
    }
    return g;
}

MaclaurinSides newton_maclaurin(const Spectrum& lambda, int k, int l, int r, int s) {
    const int n = lambda.dim();
    if (!(k > l && l >= 0 && r > s && s >= 0 && k >= r && l >= s && k <= n))
        throw std::invalid_argument("newton_maclaurin: index constraints violated");
    const ConeMargin cm = gamma_k_membership(lambda, k);
    if (!cm.member)
        throw NotAdmissibleError("newton_maclaurin: spectrum outside Gamma_k", cm);
    std::array<double, kMaxDim + 1> e{};
    esf_table(lambda, k, {}, e.data());
    const auto normalized = [&](int m) { return e[m] / binomial(n, m); };
    MaclaurinSides sides;
    sides.lhs = std::pow(normalized(k) / normalized(l), 1.0 / (k - l));
    sides.rhs = std::pow(normalized(r) / normalized(s), 1.0 / (r - s));
    return sides;
}

}  // namespace hessquot
