#include "landaulab/linalg.hpp"

#include <lapacke.h>

#include <stdexcept>

namespace landaulab {

namespace {

Eigen::VectorXd zheevd(char jobz, Eigen::MatrixXcd& A) {
    const lapack_int n = static_cast<lapack_int>(A.rows());
    if (A.cols() != n) throw std::invalid_argument("hermitian_eig: matrix not square");
    Eigen::VectorXd w(n);
    lapack_int info = LAPACKE_zheevd(
        LAPACK_COL_MAJOR, jobz, 'L', n,
        reinterpret_cast<lapack_complex_double*>(A.data()), n, w.data());
    if (info != 0)
        throw std::runtime_error("LAPACKE_zheevd failed with info=" + std::to_string(info));
    return w;
}

} // namespace

HermitianEig hermitian_eig(Eigen::MatrixXcd A) {
    HermitianEig out;
    out.values = zheevd('V', A);
    out.vectors = std::move(A);
    return out;
}

Eigen::VectorXd hermitian_eigenvalues(Eigen::MatrixXcd A) {
    return zheevd('N', A);
}

} // namespace landaulab
