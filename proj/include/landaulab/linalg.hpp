#pragma once

#include <Eigen/Dense>

namespace landaulab {

struct HermitianEig {
    Eigen::VectorXd values;   // ascending
    Eigen::MatrixXcd vectors; // columns, orthonormal
};

// Dense Hermitian eigendecomposition via LAPACK (zheevd). The input is used
// as workspace internally; pass by value.
HermitianEig hermitian_eig(Eigen::MatrixXcd A);

// Eigenvalues only (no vectors), cheaper for spectral diagnostics.
Eigen::VectorXd hermitian_eigenvalues(Eigen::MatrixXcd A);

} // namespace landaulab
