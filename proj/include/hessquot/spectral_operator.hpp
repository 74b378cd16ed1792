#pragma once

#include "hessquot/symmetric_functions.hpp"

#include <Eigen/Dense>

namespace hessquot {

/// Dense symmetric matrix; the constructor symmetrizes (A + A^T)/2 so the
/// stored entries satisfy m(i,j) == m(j,i) exactly.
class SymMatrix {
public:
    explicit SymMatrix(Eigen::MatrixXd m);

    int dim() const noexcept { return static_cast<int>(m_.rows()); }
    double operator()(int i, int j) const { return m_(i, j); }
    const Eigen::MatrixXd& matrix() const noexcept { return m_; }

private:
    Eigen::MatrixXd m_;
};

/// Eigenvalues sorted descending; basis columns are the matching eigenvectors.
struct SpectralDecomposition {
    Spectrum eigenvalues;
    Eigen::MatrixXd basis;
};

/// Spectral decomposition of a symmetric matrix.  Closed form for n = 2,
/// cyclic Jacobi sweeps for n >= 3 (off-diagonal norm driven below
/// 1e-13 * ||A||_F), so the basis is orthogonal by construction.
SpectralDecomposition eigen_sym(const SymMatrix& A);

/// F(A) = sigma_k(lambda(A)) / sigma_l(lambda(A)).
double operator_value(const SymMatrix& A, const HessianPair& p);

/// The linearization F^{ij} = dF/dA_ij = Q diag(dF/dlambda) Q^T; symmetric
/// positive definite for lambda(A) in Gamma_k.
SymMatrix operator_derivative(const SymMatrix& A, const HessianPair& p);

ConeMargin admissibility(const SymMatrix& A, int k);

}  // namespace hessquot
