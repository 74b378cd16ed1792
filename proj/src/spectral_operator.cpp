#include "hessquot/spectral_operator.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

namespace hessquot {

SymMatrix::SymMatrix(Eigen::MatrixXd m) : m_(std::move(m)) {
    if (m_.rows() != m_.cols() || m_.rows() < 1)
        throw std::invalid_argument("SymMatrix: must be square and nonempty");
    if (!m_.allFinite())
        throw std::invalid_argument("SymMatrix: entries must be finite");
    m_ = ((m_ + m_.transpose()) * 0.5).eval();
}

namespace {

SpectralDecomposition eigen2(const Eigen::MatrixXd& A) {
    const double a = A(0, 0), b = A(1, 1), c = A(0, 1);
    Eigen::MatrixXd q(2, 2);
    if (c == 0.0) {
        q.setIdentity();
    } else {
        const double th = 0.5 * std::atan2(2.0 * c, a - b);
        q << std::cos(th), -std::sin(th), std::sin(th), std::cos(th);
    }
    Eigen::Vector2d ev;
    for (int i = 0; i < 2; ++i) ev[i] = q.col(i).dot(A * q.col(i));
    if (ev[0] < ev[1]) {
        std::swap(ev[0], ev[1]);
        q.col(0).swap(q.col(1));
    }
    return SpectralDecomposition{Spectrum(ev), q};
}

SpectralDecomposition jacobi(const Eigen::MatrixXd& A) {
    const int n = static_cast<int>(A.rows());
    Eigen::MatrixXd m = A;
    Eigen::MatrixXd q = Eigen::MatrixXd::Identity(n, n);
    const double scale = A.norm();
    const double target = 1e-13 * scale;

    for (int sweep = 0; sweep < 60; ++sweep) {
        double off = 0.0;
        for (int p = 0; p < n; ++p)
            for (int r = p + 1; r < n; ++r) off += m(p, r) * m(p, r);
        off = std::sqrt(2.0 * off);
        if (off <= target || scale == 0.0) break;

        for (int p = 0; p < n; ++p) {
            for (int r = p + 1; r < n; ++r) {
                const double apq = m(p, r);
                if (std::abs(apq) <= 1e-300) continue;
                const double tau = (m(r, r) - m(p, p)) / (2.0 * apq);
                const double t = (tau >= 0.0 ? 1.0 : -1.0) /
                                 (std::abs(tau) + std::sqrt(1.0 + tau * tau));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;
                // rotate rows/columns p and r
                for (int i = 0; i < n; ++i) {
                    const double mip = m(i, p), mir = m(i, r);
                    m(i, p) = c * mip - s * mir;
                    m(i, r) = s * mip + c * mir;
                }
                for (int i = 0; i < n; ++i) {
                    const double mpi = m(p, i), mri = m(r, i);
                    m(p, i) = c * mpi - s * mri;
                    m(r, i) = s * mpi + c * mri;
                }
                for (int i = 0; i < n; ++i) {
                    const double qip = q(i, p), qir = q(i, r);
                    q(i, p) = c * qip - s * qir;
                    q(i, r) = s * qip + c * qir;
                }
            }
        }
    }

    Eigen::VectorXd ev(n);
    for (int i = 0; i < n; ++i) ev[i] = m(i, i);
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int i, int j) { return ev[i] > ev[j]; });
    Eigen::VectorXd evs(n);
    Eigen::MatrixXd qs(n, n);
    for (int i = 0; i < n; ++i) {
        evs[i] = ev[order[i]];
        qs.col(i) = q.col(order[i]);
    }
    return SpectralDecomposition{Spectrum(evs), qs};
}

}  // namespace

SpectralDecomposition eigen_sym(const SymMatrix& A) {
    const int n = A.dim();
    if (n == 1) {
        Eigen::VectorXd ev(1);
        ev[0] = A(0, 0);
        return SpectralDecomposition{Spectrum(ev), Eigen::MatrixXd::Identity(1, 1)};
    }
    if (n == 2) return eigen2(A.matrix());
    return jacobi(A.matrix());
}

double operator_value(const SymMatrix& A, const HessianPair& p) {
    return hessian_quotient(eigen_sym(A).eigenvalues, p);
}

SymMatrix operator_derivative(const SymMatrix& A, const HessianPair& p) {
    const SpectralDecomposition d = eigen_sym(A);
    const Eigen::VectorXd g = hessian_quotient_gradient(d.eigenvalues, p);
    return SymMatrix(d.basis * g.asDiagonal() * d.basis.transpose());
}

ConeMargin admissibility(const SymMatrix& A, int k) {
    return gamma_k_membership(eigen_sym(A).eigenvalues, k);
}

}  // namespace hessquot
