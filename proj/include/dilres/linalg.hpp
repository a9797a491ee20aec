#pragma once

#include "dilres/types.hpp"

namespace dilres::linalg {

struct EigenDecomposition {
    CVector values;
    CMatrix vectors;  // right eigenvectors, unit 2-norm columns
};

// General complex eigenproblem (LAPACK zgeev, backward stable).
EigenDecomposition eig_general(const CMatrix& a);

// Selected eigenpairs (indices il..iu, zero-based, ascending) of the real
// symmetric tridiagonal matrix with diagonal d and off-diagonal e.
void eig_tridiagonal(const RVector& d, const RVector& e, int il, int iu, RVector& values, RMatrix& vectors);

// Orthonormal basis for the null space of a (singular values below tol * max(1, s_max)).
CMatrix null_space(const CMatrix& a, double tol);

// Orthonormal basis for the column span of a.
CMatrix orthonormal_basis(const CMatrix& a, double tol = 1e-12);

inline CMatrix kron(const CMatrix& a, const CMatrix& b) {
    CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j) out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

}  // namespace dilres::linalg
