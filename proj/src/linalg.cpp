#include "dilres/linalg.hpp"

#include <complex>
#include <string>
#include <vector>

#define lapack_complex_double std::complex<double>
#include <lapacke.h>

namespace dilres::linalg {

EigenDecomposition eig_general(const CMatrix& a) {
    if (a.rows() != a.cols()) throw InvalidArgument("eigs: matrix is not square");
    if (!a.allFinite()) throw InvalidArgument("eigs: matrix has non-finite entries");
    const lapack_int n = static_cast<lapack_int>(a.rows());
    EigenDecomposition out;
    out.values.resize(n);
    out.vectors.resize(n, n);
    if (n == 0) return out;

    CMatrix work = a;  // column-major, overwritten by zgeev
    cplx dummy;
    const lapack_int info = LAPACKE_zgeev(LAPACK_COL_MAJOR, 'N', 'V', n, work.data(), n, out.values.data(), &dummy, 1,
                                          out.vectors.data(), n);
    if (info != 0) throw NumericalError("eigs: zgeev failed with info " + std::to_string(info));
    return out;
}

void eig_tridiagonal(const RVector& d, const RVector& e, int il, int iu, RVector& values, RMatrix& vectors) {
    const lapack_int n = static_cast<lapack_int>(d.size());
    if (e.size() + 1 != d.size()) throw InvalidArgument("tridiagonal: size mismatch");
    if (il < 0 || iu < il || iu >= n) throw InvalidArgument("tridiagonal: index range out of bounds");
    RVector dd = d;
    RVector ee(n);
    ee.head(n - 1) = e;
    ee(n - 1) = 0.0;
    lapack_int m = 0;
    const lapack_int count = iu - il + 1;
    values.resize(n);
    vectors.resize(n, count);
    std::vector<lapack_int> isuppz(2 * static_cast<std::size_t>(count));
    const lapack_int info = LAPACKE_dstevr(LAPACK_COL_MAJOR, 'V', 'I', n, dd.data(), ee.data(), 0.0, 0.0, il + 1,
                                           iu + 1, 0.0, &m, values.data(), vectors.data(), n, isuppz.data());
    if (info != 0 || m != count) throw NumericalError("tridiagonal: dstevr failed with info " + std::to_string(info));
    values.conservativeResize(m);
}

CMatrix null_space(const CMatrix& a, double tol) {
    Eigen::JacobiSVD<CMatrix> svd(a, Eigen::ComputeFullV);
    const RVector& s = svd.singularValues();
    const double scale = std::max(1.0, s.size() ? s(0) : 0.0);
    Eigen::Index rank = 0;
    for (Eigen::Index i = 0; i < s.size(); ++i)
        if (s(i) > tol * scale) ++rank;
    return svd.matrixV().rightCols(a.cols() - rank);
}

CMatrix orthonormal_basis(const CMatrix& a, double tol) {
    Eigen::JacobiSVD<CMatrix> svd(a, Eigen::ComputeThinU);
    const RVector& s = svd.singularValues();
    const double scale = s.size() ? std::max(s(0), 1e-300) : 1.0;
    Eigen::Index rank = 0;
    for (Eigen::Index i = 0; i < s.size(); ++i)
        if (s(i) > tol * scale) ++rank;
    return svd.matrixU().leftCols(rank);
}

}  // namespace dilres::linalg
