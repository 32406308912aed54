#pragma once

#include <functional>

#include <Eigen/Dense>

#include "cmscat/grid.hpp"

namespace cmscat {

using CMat = Eigen::MatrixXcd;
using LinearOp = std::function<CVec(const CVec&)>;

// Full eigendecomposition of a Hermitian matrix (LAPACK zheevr).
// Eigenvalues ascend; eigenvectors are the columns of vectors.
struct HermitianEigen {
    RVec values;
    CMat vectors;
};
HermitianEigen hermitian_eigen(const CMat& A);

// Dense LU solve (LAPACK zgesv). Returns the 1-norm condition estimate
// through rcond when non-null.
CVec lu_solve(const CMat& A, const CVec& b, double* rcond = nullptr);

struct GmresResult {
    CVec x;
    int iterations = 0;
    double relative_residual = 0.0;
    bool converged = false;
};

// Restarted GMRES with modified Gram-Schmidt and Givens rotations.
GmresResult gmres(const LinearOp& A, const CVec& b, const CVec& x0, double rtol, int restart, int max_iter);

// Power iteration estimate of the spectral radius of A.
double power_norm_estimate(const LinearOp& A, int n, int iterations, unsigned seed);

}  // namespace cmscat
