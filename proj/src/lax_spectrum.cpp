#include "cmscat/lax_spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "cmscat/errors.hpp"

namespace cmscat {

std::vector<double> DiscreteSpectrum::lambdas() const {
    std::vector<double> v;
    for (const auto& p : pairs) v.push_back(p.lambda);
    return v;
}

std::vector<double> DiscreteSpectrum::ratios() const {
    std::vector<double> v;
    for (const auto& p : pairs) v.push_back(p.detection_ratio);
    return v;
}

CVec apply_lax(const Grid& g, const CVec& q, const CVec& f) {
    CVec out = -kI * derivative(g, f) - q.cwiseProduct(cplus(g, q.conjugate().cwiseProduct(f)));
    return hardy_project(g, out);
}

CVec modes_to_grid(const Grid& g, const CVec& coeffs) {
    CVec F = CVec::Zero(g.N());
    F.head(coeffs.size()) = coeffs;
    return ifft(F) * static_cast<double>(g.N());
}

CVec grid_to_modes(const Grid& g, const CVec& f) {
    return fft(f).head(g.hardy_modes()) / static_cast<double>(g.N());
}

CMat assemble_lax_matrix(const Grid& g, const CVec& q, double hermitian_tol) {
    const int N = g.N();
    const int n = g.hardy_modes();
    const CVec Qb = fft(CVec(q.conjugate()));
    CMat M(n, n);
    CVec U(N);
    for (int b = 0; b < n; ++b) {
        // conj(q) e^{2 pi i b j / N} has coefficients shifted by b
        for (int m = 0; m < N; ++m) U[m] = Qb[(m - b + N) % N];
        U[0] *= 0.5;
        U.tail(N / 2).setZero();
        CVec v = q.cwiseProduct(ifft(U));
        CVec V = fft(v) / static_cast<double>(N);
        M.col(b) = -V.head(n);
        M(b, b) += g.xi(b);
    }
    const double asym = (M - M.adjoint()).cwiseAbs().maxCoeff();
    const double scale = std::max(1.0, M.cwiseAbs().maxCoeff());
    if (asym > hermitian_tol * scale) {
        std::ostringstream os;
        os << "assembled Lax matrix is not Hermitian (residual " << asym << ")";
        throw ContractError(os.str());
    }
    return 0.5 * (M + M.adjoint());
}

LaxGalerkin lax_eigensystem(const Grid& g, const CVec& q, double hermitian_tol) {
    LaxGalerkin lg;
    lg.grid = g;
    lg.eig = hermitian_eigen(assemble_lax_matrix(g, q, hermitian_tol));
    lg.q_modes = fft(q).head(g.hardy_modes());
    return lg;
}

double detection_ratio(const Grid& g, const CVec& q, const CVec& phi) {
    const double n2 = norm2(g, phi);
    if (n2 == 0.0) return 0.0;
    return std::norm(inner(g, q, phi)) / (2.0 * kPi * n2);
}

CVec normalize_eigenfunction(const Grid& g, const CVec& q, const CVec& phi) {
    const cplx ip = inner(g, q, phi);
    if (std::abs(ip) <= 1e-8 * norm_l2(g, q) * norm_l2(g, phi))
        throw NotEigenfunctionError("<q, phi> vanishes; phi is not an eigenfunction of L_q");
    // <q, c phi> = conj(c) <q, phi>
    const cplx c = std::conj(2.0 * kPi * kI / ip);
    return c * phi;
}

DiscreteSpectrum discrete_spectrum(const Grid& g, const CVec& q, const SpectrumOptions& opt) {
    return discrete_spectrum(lax_eigensystem(g, q, opt.hermitian_tol), q, opt);
}

DiscreteSpectrum discrete_spectrum(const LaxGalerkin& lg, const CVec& q, const SpectrumOptions& opt) {
    const Grid& g = lg.grid;
    DiscreteSpectrum ds;
    ds.mass = norm2(g, q);
    const int n = g.hardy_modes();
    // <q, v> = dx sum_a conj(V_a) fft(q)_a and ||v||^2 = 2L sum |V_a|^2
    CVec proj = lg.eig.vectors.adjoint() * lg.q_modes;
    for (int i = 0; i < n; ++i) {
        const double ratio = std::norm(g.dx() * proj[i]) / (2.0 * kPi * 2.0 * g.L());
        const double lam = lg.eig.values[i];
        if (ratio >= opt.warn_low && ratio <= opt.warn_high) {
            std::ostringstream os;
            os << "ambiguous classification at lambda=" << lam << " (ratio " << ratio << ")";
            ds.warnings.push_back(os.str());
        }
        if (ratio < opt.detect_threshold) continue;
        EigenPair p;
        p.lambda = lam;
        p.detection_ratio = ratio;
        p.phi = normalize_eigenfunction(g, q, modes_to_grid(g, lg.eig.vectors.col(i)));
        ds.pairs.push_back(std::move(p));
    }
    std::sort(ds.pairs.begin(), ds.pairs.end(), [](const auto& a, const auto& b) { return a.lambda < b.lambda; });
    const double deg = opt.degeneracy_tol >= 0 ? opt.degeneracy_tol : 1e-6 * std::max(1.0, ds.mass);
    for (size_t i = 1; i < ds.pairs.size(); ++i)
        if (ds.pairs[i].lambda - ds.pairs[i - 1].lambda < deg)
            ds.warnings.push_back("eigenvalues closer than the degeneracy tolerance");
    if (2.0 * kPi * ds.count() > ds.mass + 1e-3)
        ds.warnings.push_back("eigenvalue count exceeds the bound ||q||^2 / (2 pi)");
    return ds;
}

CVec galerkin_resolvent(const LaxGalerkin& lg, cplx k, const CVec& f) {
    const Grid& g = lg.grid;
    CVec c = lg.eig.vectors.adjoint() * grid_to_modes(g, f);
    for (Eigen::Index i = 0; i < c.size(); ++i) c[i] /= (lg.eig.values[i] - k);
    return modes_to_grid(g, lg.eig.vectors * c);
}

}  // namespace cmscat
