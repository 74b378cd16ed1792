#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "hessquot/rng.hpp"
#include "hessquot/spectral_operator.hpp"

#include <cmath>

using namespace hessquot;

namespace {

Eigen::MatrixXd random_sym(Rng& rng, int n, double lo = -1.0, double hi = 1.0) {
    Eigen::MatrixXd m(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) m(i, j) = m(j, i) = rng.uniform(lo, hi);
    return m;
}

Eigen::MatrixXd random_orthogonal(Rng& rng, int n) {
    Eigen::MatrixXd m(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) m(i, j) = rng.uniform(-1.0, 1.0);
    return Eigen::HouseholderQR<Eigen::MatrixXd>(m).householderQ();
}

SymMatrix random_admissible(Rng& rng, int n, int k) {
    for (;;) {
        Eigen::MatrixXd m = random_sym(rng, n);
        m += rng.uniform(0.0, 2.0) * Eigen::MatrixXd::Identity(n, n);
        SymMatrix A(m);
        if (admissibility(A, k).member) return A;
    }
}

// closed-form eigenvalues of a symmetric 3x3 matrix (trigonometric method),
// used as an independent oracle for the Jacobi path
Eigen::Vector3d eig3_trig(const Eigen::Matrix3d& A) {
    const double q = A.trace() / 3.0;
    const Eigen::Matrix3d B = A - q * Eigen::Matrix3d::Identity();
    const double p2 = (B * B).trace() / 6.0;
    const double p = std::sqrt(std::max(p2, 0.0));
    if (p < 1e-300) return Eigen::Vector3d::Constant(q);
    const double detB = B.determinant();
    double r = detB / (2.0 * p * p * p);
    r = std::clamp(r, -1.0, 1.0);
    const double phi = std::acos(r) / 3.0;
    Eigen::Vector3d ev;
    ev[0] = q + 2.0 * p * std::cos(phi);
    ev[2] = q + 2.0 * p * std::cos(phi + 2.0 * M_PI / 3.0);
    ev[1] = 3.0 * q - ev[0] - ev[2];
    std::sort(ev.data(), ev.data() + 3, std::greater<double>());
    return ev;
}

}  // namespace

TEST_CASE("eigen decomposition basics") {
    Eigen::Matrix2d d;
    d << 3, 0, 0, 1;
    const SpectralDecomposition dec = eigen_sym(SymMatrix(d));
    CHECK(dec.eigenvalues[0] == doctest::Approx(3.0));
    CHECK(dec.eigenvalues[1] == doctest::Approx(1.0));
    CHECK(dec.basis.cwiseAbs().isApprox(Eigen::Matrix2d::Identity(), 1e-12));

    Eigen::Matrix2d offdiag;
    offdiag << 0, 1, 1, 0;
    const SpectralDecomposition dec2 = eigen_sym(SymMatrix(offdiag));
    CHECK(dec2.eigenvalues[0] == doctest::Approx(1.0));
    CHECK(dec2.eigenvalues[1] == doctest::Approx(-1.0));

    Eigen::MatrixXd bad(2, 2);
    bad << 1.0, std::nan(""), 0.0, 1.0;
    CHECK_THROWS_AS(SymMatrix{bad}, std::invalid_argument);
}

TEST_CASE("decomposition invariants on random matrices") {
    Rng rng(5);
    for (int n = 2; n <= 8; ++n) {
        for (int rep = 0; rep < 30; ++rep) {
            const SymMatrix A(random_sym(rng, n, -2.0, 2.0));
            const SpectralDecomposition dec = eigen_sym(A);
            const Eigen::MatrixXd& Q = dec.basis;
            CHECK((Q.transpose() * Q - Eigen::MatrixXd::Identity(n, n))
                      .cwiseAbs()
                      .maxCoeff() <= 1e-12);
            const Eigen::MatrixXd rec =
                Q * dec.eigenvalues.values().asDiagonal() * Q.transpose();
            CHECK((rec - A.matrix()).norm() <= 1e-10 * std::max(1.0, A.matrix().norm()));
            for (int i = 0; i + 1 < n; ++i) CHECK(dec.eigenvalues[i] >= dec.eigenvalues[i + 1]);
        }
    }
}

TEST_CASE("jacobi eigenvalues match the closed-form 3x3 oracle") {
    Rng rng(31);
    for (int rep = 0; rep < 200; ++rep) {
        const Eigen::Matrix3d A = random_sym(rng, 3, -2.0, 2.0);
        const Eigen::Vector3d want = eig3_trig(A);
        const SpectralDecomposition dec = eigen_sym(SymMatrix(Eigen::MatrixXd(A)));
        for (int i = 0; i < 3; ++i)
            CHECK(std::abs(dec.eigenvalues[i] - want[i]) <= 1e-10 * std::max(1.0, want.norm()));
    }
}

TEST_CASE("operator value: closed forms and conjugation invariance") {
    Eigen::Matrix2d two = 2.0 * Eigen::Matrix2d::Identity();
    CHECK(operator_value(SymMatrix(Eigen::MatrixXd(two)), HessianPair(2, 0, 2)) ==
          doctest::Approx(4.0));
    for (int n = 2; n <= 4; ++n) {
        const SymMatrix I(Eigen::MatrixXd::Identity(n, n));
        for (int k = 1; k <= n; ++k)
            for (int l = 0; l < k; ++l)
                CHECK(operator_value(I, HessianPair(k, l, n)) ==
                      doctest::Approx(binomial(n, k) / binomial(n, l)));
    }
    Rng rng(17);
    for (int rep = 0; rep < 50; ++rep) {
        const int n = 3;
        const SymMatrix A = random_admissible(rng, n, 2);
        const Eigen::MatrixXd Q = random_orthogonal(rng, n);
        const SymMatrix B(Q * A.matrix() * Q.transpose());
        const HessianPair p(2, 1, n);
        CHECK(operator_value(A, p) ==
              doctest::Approx(operator_value(B, p)).epsilon(1e-10));
    }
}

TEST_CASE("operator derivative examples") {
    Eigen::Matrix2d d;
    d << 0.8, 0, 0, 2.5;
    const SymMatrix Fd = operator_derivative(SymMatrix(Eigen::MatrixXd(d)), HessianPair(2, 0, 2));
    CHECK(Fd(0, 0) == doctest::Approx(2.5));
    CHECK(Fd(1, 1) == doctest::Approx(0.8));
    CHECK(Fd(0, 1) == doctest::Approx(0.0).epsilon(1e-14));

    const SymMatrix lap = operator_derivative(SymMatrix(Eigen::MatrixXd::Identity(3, 3)),
                                              HessianPair(1, 0, 3));
    CHECK(lap.matrix().isApprox(Eigen::MatrixXd::Identity(3, 3), 1e-12));
}

TEST_CASE("operator derivative matches finite differences") {
    Rng rng(23);
    for (int n = 2; n <= 4; ++n) {
        for (int k = 1; k <= n; ++k) {
            for (int l = 0; l < k; ++l) {
                const HessianPair p(k, l, n);
                for (int rep = 0; rep < 20; ++rep) {
                    const SymMatrix A = random_admissible(rng, n, k);
                    const SymMatrix Fd = operator_derivative(A, p);
                    const double h = 1e-5;
                    for (int i = 0; i < n; ++i) {
                        for (int j = i; j < n; ++j) {
                            Eigen::MatrixXd Ep = A.matrix(), Em = A.matrix();
                            Ep(i, j) += h;
                            Ep(j, i) = Ep(i, j);
                            Em(i, j) -= h;
                            Em(j, i) = Em(i, j);
                            const double denom = 2.0 * h * (i == j ? 1.0 : 2.0);
                            const double fd = (operator_value(SymMatrix(Ep), p) -
                                               operator_value(SymMatrix(Em), p)) /
                                              denom;
                            // the symmetric two-sided bump moves both (i,j) and
                            // (j,i); F^{ij} is the per-entry derivative
                            CHECK(std::abs(Fd(i, j) - fd) <=
                                  1e-6 * std::max(1.0, std::abs(fd)));
                        }
                    }
                }
            }
        }
    }
}

TEST_CASE("repeated eigenvalues keep the derivative exact") {
    for (int n = 2; n <= 4; ++n) {
        const double c = 1.3;
        const SymMatrix A(Eigen::MatrixXd(c * Eigen::MatrixXd::Identity(n, n)));
        const HessianPair p(2, 0, n);
        const SymMatrix Fd = operator_derivative(A, p);
        const Eigen::VectorXd g =
            hessian_quotient_gradient(Spectrum(Eigen::VectorXd::Constant(n, c)), p);
        CHECK(Fd.matrix().isApprox(g[0] * Eigen::MatrixXd::Identity(n, n), 1e-12));
        const double h = 1e-5;
        Eigen::MatrixXd Ep = A.matrix(), Em = A.matrix();
        Ep(0, 1) += h;
        Ep(1, 0) += h;
        Em(0, 1) -= h;
        Em(1, 0) -= h;
        const double fd =
            (operator_value(SymMatrix(Ep), p) - operator_value(SymMatrix(Em), p)) / (4.0 * h);
        CHECK(std::abs(Fd(0, 1) - fd) <= 1e-6);
    }
}

TEST_CASE("trace identity and positive definiteness") {
    Rng rng(41);
    for (int n = 2; n <= 4; ++n) {
        for (int k = 1; k <= n; ++k) {
            // trace(D sigma_k(A) * A) = k sigma_k(lambda(A))
            for (int rep = 0; rep < 50; ++rep) {
                const SymMatrix A = random_admissible(rng, n, k);
                const HessianPair p(k, 0, n);
                const SymMatrix Fd = operator_derivative(A, p);
                const double lhs = (Fd.matrix() * A.matrix()).trace();
                const double rhs =
                    k * elementary_symmetric(eigen_sym(A).eigenvalues, k);
                CHECK(std::abs(lhs - rhs) <= 1e-10 * std::max(1.0, std::abs(rhs)));
            }
            for (int l = 0; l < k; ++l) {
                const HessianPair p(k, l, n);
                for (int rep = 0; rep < 1000; ++rep) {
                    const SymMatrix A = random_admissible(rng, n, k);
                    const SpectralDecomposition dec = eigen_sym(operator_derivative(A, p));
                    CHECK(dec.eigenvalues[n - 1] > 0.0);
                }
            }
        }
    }
}

TEST_CASE("admissibility examples") {
    CHECK(admissibility(SymMatrix(Eigen::MatrixXd::Identity(3, 3)), 2).member);
    CHECK(admissibility(SymMatrix(Eigen::MatrixXd::Identity(3, 3)), 2).margin ==
          doctest::Approx(1.0));
    Eigen::Matrix3d d = Eigen::Vector3d(-0.5, 2, 2).asDiagonal();
    CHECK(admissibility(SymMatrix(Eigen::MatrixXd(d)), 2).member);
    Eigen::Matrix2d bad = Eigen::Vector2d(-1.0, 0.5).asDiagonal();
    CHECK_FALSE(admissibility(SymMatrix(Eigen::MatrixXd(bad)), 2).member);
}
