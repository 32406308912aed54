#include "cmscat/linalg.hpp"

#include <lapacke.h>

#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include "cmscat/errors.hpp"

namespace cmscat {

HermitianEigen hermitian_eigen(const CMat& A) {
    // zheevr (MRRR). The divide-and-conquer driver zheevd of some OpenBLAS
    // builds returns non-orthogonal eigenvectors.
    const lapack_int n = static_cast<lapack_int>(A.rows());
    CMat work = A;
    HermitianEigen out;
    out.vectors.resize(n, n);
    out.values.resize(n);
    std::vector<lapack_int> support(2 * static_cast<size_t>(n));
    lapack_int found = 0;
    const lapack_int info = LAPACKE_zheevr(
        LAPACK_COL_MAJOR, 'V', 'A', 'U', n, reinterpret_cast<lapack_complex_double*>(work.data()), n, 0.0, 0.0, 0,
        0, 0.0, &found, out.values.data(), reinterpret_cast<lapack_complex_double*>(out.vectors.data()), n,
        support.data());
    if (info != 0 || found != n) throw SolverError("zheevr failed with info " + std::to_string(info), 0.0);
    return out;
}

CVec lu_solve(const CMat& A, const CVec& b, double* rcond) {
    const lapack_int n = static_cast<lapack_int>(A.rows());
    CMat lu = A;
    CVec x = b;
    std::vector<lapack_int> piv(n);
    const double anorm = A.cwiseAbs().colwise().sum().maxCoeff();
    lapack_int info = LAPACKE_zgetrf(LAPACK_COL_MAJOR, n, n, reinterpret_cast<lapack_complex_double*>(lu.data()),
                                     n, piv.data());
    if (info != 0) throw SolverError("zgetrf: matrix is singular", std::numeric_limits<double>::infinity());
    if (rcond) {
        double rc = 0.0;
        LAPACKE_zgecon(LAPACK_COL_MAJOR, '1', n, reinterpret_cast<lapack_complex_double*>(lu.data()), n, anorm,
                       &rc);
        *rcond = rc;
    }
    info = LAPACKE_zgetrs(LAPACK_COL_MAJOR, 'N', n, 1, reinterpret_cast<const lapack_complex_double*>(lu.data()),
                          n, piv.data(), reinterpret_cast<lapack_complex_double*>(x.data()), n);
    if (info != 0) throw SolverError("zgetrs failed", 0.0);
    return x;
}

GmresResult gmres(const LinearOp& A, const CVec& b, const CVec& x0, double rtol, int restart, int max_iter) {
    const Eigen::Index n = b.size();
    GmresResult res;
    res.x = x0.size() == n ? x0 : CVec::Zero(n);
    const double bnorm = b.norm();
    if (bnorm == 0.0) {
        res.x.setZero();
        res.converged = true;
        return res;
    }
    const int m = std::max(1, restart);
    CMat V(n, m + 1);
    CMat H = CMat::Zero(m + 1, m);
    std::vector<cplx> cs(m), sn(m);
    CVec s(m + 1);
    while (res.iterations < max_iter) {
        CVec r = b - A(res.x);
        double beta = r.norm();
        res.relative_residual = beta / bnorm;
        if (res.relative_residual <= rtol) {
            res.converged = true;
            return res;
        }
        V.col(0) = r / beta;
        H.setZero();
        s.setZero();
        s[0] = beta;
        int j = 0;
        for (; j < m && res.iterations < max_iter; ++j) {
            ++res.iterations;
            CVec w = A(V.col(j));
            for (int i = 0; i <= j; ++i) {
                H(i, j) = V.col(i).dot(w);
                w -= H(i, j) * V.col(i);
            }
            // one reorthogonalization pass keeps the basis clean at tight tolerances
            for (int i = 0; i <= j; ++i) {
                const cplx c = V.col(i).dot(w);
                H(i, j) += c;
                w -= c * V.col(i);
            }
            const double hn = w.norm();
            H(j + 1, j) = hn;
            if (hn > 0.0) V.col(j + 1) = w / hn;
            for (int i = 0; i < j; ++i) {
                const cplx t = std::conj(cs[i]) * H(i, j) + std::conj(sn[i]) * H(i + 1, j);
                H(i + 1, j) = -sn[i] * H(i, j) + cs[i] * H(i + 1, j);
                H(i, j) = t;
            }
            const double a = std::abs(H(j, j));
            const double d = std::hypot(a, hn);
            if (d == 0.0) {
                cs[j] = 1.0;
                sn[j] = 0.0;
            } else if (a == 0.0) {
                cs[j] = 0.0;
                sn[j] = 1.0;
            } else {
                cs[j] = H(j, j) / d;
                sn[j] = hn / d;
            }
            // G = [conj(c) conj(s); -s c] applied to (H(j,j), hn) gives (d, 0)
            H(j, j) = std::conj(cs[j]) * H(j, j) + std::conj(sn[j]) * hn;
            H(j + 1, j) = 0.0;
            s[j + 1] = -sn[j] * s[j];
            s[j] = std::conj(cs[j]) * s[j];
            res.relative_residual = std::abs(s[j + 1]) / bnorm;
            if (res.relative_residual <= rtol || hn == 0.0) {
                ++j;
                break;
            }
        }
        CVec y = CVec::Zero(j);
        for (int i = j - 1; i >= 0; --i) {
            cplx acc = s[i];
            for (int k = i + 1; k < j; ++k) acc -= H(i, k) * y[k];
            y[i] = acc / H(i, i);
        }
        for (int i = 0; i < j; ++i) res.x += y[i] * V.col(i);
        if (res.relative_residual <= rtol) {
            const double true_res = (b - A(res.x)).norm() / bnorm;
            res.relative_residual = true_res;
            if (true_res <= 10.0 * rtol) {
                res.converged = true;
                return res;
            }
        }
    }
    res.relative_residual = (b - A(res.x)).norm() / bnorm;
    res.converged = res.relative_residual <= rtol;
    return res;
}

double power_norm_estimate(const LinearOp& A, int n, int iterations, unsigned seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> nd;
    CVec v(n);
    for (int i = 0; i < n; ++i) v[i] = cplx(nd(rng), nd(rng));
    v /= v.norm();
    double est = 0.0;
    for (int it = 0; it < iterations; ++it) {
        CVec w = A(v);
        const double nw = w.norm();
        est = nw;
        if (nw == 0.0) return 0.0;
        v = w / nw;
    }
    return est;
}

}  // namespace cmscat
