#include "cmscat/spectral_transform.hpp"

#include <cmath>

#include "cmscat/errors.hpp"

namespace cmscat {

namespace {

void require_family(const ScatteringData& data) {
    if (data.me_minus.size() != data.lambda.size())
        throw ContractError("the sweep did not keep the m_e(lam - 0i) family");
}

}  // namespace

RVec trapezoid_weights(const std::vector<double>& x) {
    const size_t n = x.size();
    RVec w = RVec::Zero(static_cast<Eigen::Index>(n));
    for (size_t i = 0; i + 1 < n; ++i) {
        const double h = x[i + 1] - x[i];
        w[i] += 0.5 * h;
        w[i + 1] += 0.5 * h;
    }
    return w;
}

DistortedSpectrum distorted_forward(const Grid& g, const ScatteringData& data, const CVec& f) {
    require_family(data);
    DistortedSpectrum s;
    s.lambda = data.lambda;
    s.values.resize(static_cast<Eigen::Index>(data.lambda.size()));
    const double c = 1.0 / std::sqrt(2.0 * kPi);
    for (size_t i = 0; i < data.lambda.size(); ++i) s.values[i] = c * inner(g, f, data.me_minus[i]);
    s.point_part.resize(data.eigen.count());
    for (int j = 0; j < data.eigen.count(); ++j) {
        const CVec& phi = data.eigen.pairs[j].phi;
        s.point_part[j] = inner(g, f, phi) / norm2(g, phi);
    }
    return s;
}

CVec distorted_adjoint(const Grid& g, const ScatteringData& data, const CVec& values) {
    require_family(data);
    const RVec w = trapezoid_weights(data.lambda);
    CVec out = CVec::Zero(g.N());
    for (size_t i = 0; i < data.lambda.size(); ++i) out += (w[i] * values[i]) * data.me_minus[i];
    return out / std::sqrt(2.0 * kPi);
}

CVec distorted_inverse(const Grid& g, const ScatteringData& data, const DistortedSpectrum& s) {
    CVec out = distorted_adjoint(g, data, s.values);
    for (int j = 0; j < data.eigen.count(); ++j) out += s.point_part[j] * data.eigen.pairs[j].phi;
    return out;
}

PlancherelSplit plancherel(const Grid& g, const DistortedSpectrum& s, const CVec& f, const ScatteringData& data) {
    PlancherelSplit p;
    p.norm_sq = norm2(g, f);
    const RVec w = trapezoid_weights(s.lambda);
    for (Eigen::Index i = 0; i < s.values.size(); ++i) p.continuum += w[i] * std::norm(s.values[i]);
    for (int j = 0; j < data.eigen.count(); ++j)
        p.point += std::norm(s.point_part[j]) * norm2(g, data.eigen.pairs[j].phi);
    p.relative_error = std::abs(p.norm_sq - p.continuum - p.point) / std::max(p.norm_sq, 1e-300);
    return p;
}

Reconstruction reconstruct_q(const Grid& g, const ScatteringData& data, const CVec& q_ref, double recon_tol) {
    require_family(data);
    Reconstruction r;
    r.q = CVec::Zero(g.N());
    for (const auto& p : data.eigen.pairs) r.q += kI * p.phi;
    const RVec w = trapezoid_weights(data.lambda);
    for (size_t i = 0; i < data.lambda.size(); ++i)
        r.q -= (kI / (2.0 * kPi)) * w[i] * data.beta[i] * data.me_minus[i];
    const double nq = norm_l2(g, q_ref);
    r.relative_error = nq > 0.0 ? norm_l2(g, r.q - q_ref) / nq : norm_l2(g, r.q);
    r.failed = r.relative_error > recon_tol;
    return r;
}

}  // namespace cmscat
