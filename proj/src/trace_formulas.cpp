#include "cmscat/trace_formulas.hpp"

#include <cmath>
#include <sstream>

#include "cmscat/errors.hpp"
#include "cmscat/spectral_transform.hpp"

namespace cmscat {

double closure(cplx lhs, cplx rhs_c, cplx rhs_p) {
    return std::abs(lhs - rhs_c - rhs_p) / (std::abs(lhs) + 1.0);
}

TraceReport trace_first(const Grid& g, const CVec& q, const ScatteringData& data) {
    TraceReport r;
    r.order = 0;
    r.lhs = norm2(g, q);
    const RVec w = trapezoid_weights(data.lambda);
    double c = 0.0;
    for (size_t i = 0; i < data.lambda.size(); ++i) c += w[i] * std::norm(data.beta[i]);
    r.rhs_continuum = c / (2.0 * kPi);
    r.rhs_point = 2.0 * kPi * data.eigen.count();
    r.closure_error = closure(r.lhs, r.rhs_continuum, r.rhs_point);
    return r;
}

cplx lax_moment(const Grid& g, const CVec& q, int n) {
    CVec v = hardy_project(g, q);
    for (int i = 0; i < n; ++i) v = apply_lax(g, q, v);
    return inner(g, v, q);
}

double explicit_moment(const Grid& g, const CVec& q, int n) {
    const CVec dq = derivative(g, q);
    if (n == 1) {
        const cplx a = inner(g, CVec(-kI * dq), q);
        return a.real() - 0.5 * g.dx() * q.cwiseAbs2().cwiseAbs2().sum();
    }
    if (n == 2) {
        const CVec u = q.cwiseAbs2().cast<cplx>();
        const CVec v = -kI * dq - q.cwiseProduct(cplus(g, u));
        return norm2(g, v);
    }
    throw ConfigError("explicit trace forms exist for n = 1, 2 only");
}

TraceReport trace_higher(const Grid& g, const CVec& q, const ScatteringData& data, int n, double hygiene_tol) {
    if (n < 1 || n > 4) throw ConfigError("trace_higher supports 1 <= n <= 4");
    std::vector<std::string> warnings;
    const auto c = c_sequence(g, q, n + 1, &warnings);
    TraceReport r;
    r.order = n;
    const cplx lhs = -inner(g, c[n], q);
    r.imag_residue = std::abs(lhs.imag());
    if (r.imag_residue > hygiene_tol * std::max(std::abs(lhs), 1e-300) && std::abs(lhs) > 1e-300) {
        std::ostringstream os;
        os << "trace lhs of order " << n << " has imaginary part " << lhs.imag() << " (|lhs| " << std::abs(lhs)
           << ")";
        throw ConsistencyError(os.str());
    }
    r.lhs = lhs.real();
    const RVec w = trapezoid_weights(data.lambda);
    double cont = 0.0;
    for (size_t i = 0; i < data.lambda.size(); ++i)
        cont += w[i] * std::norm(data.beta[i]) * std::pow(data.lambda[i], n);
    r.rhs_continuum = cont / (2.0 * kPi);
    double pt = 0.0;
    for (const auto& p : data.eigen.pairs) pt += std::pow(p.lambda, n);
    r.rhs_point = 2.0 * kPi * pt;
    r.closure_error = closure(r.lhs, r.rhs_continuum, r.rhs_point);
    return r;
}

TraceReport resolvent_trace_from_m0(const Grid& g, const CVec& q, const ScatteringData& data, cplx k,
                                    const CVec& m0) {
    TraceReport r;
    r.order = -1;
    r.k = k;
    r.lhs = integrate(g, q.conjugate().cwiseProduct(m0));
    const RVec w = trapezoid_weights(data.lambda);
    cplx cont = 0.0;
    for (size_t i = 0; i < data.lambda.size(); ++i) cont += w[i] * std::norm(data.beta[i]) / (data.lambda[i] - k);
    r.rhs_continuum = cont / (2.0 * kPi);
    cplx pt = 0.0;
    for (const auto& p : data.eigen.pairs) pt += 1.0 / (p.lambda - k);
    r.rhs_point = 2.0 * kPi * pt;
    r.closure_error = closure(r.lhs, r.rhs_continuum, r.rhs_point);
    return r;
}

TraceReport resolvent_trace_check(const Grid& g, const CVec& q, const ScatteringData& data, cplx k,
                                  const JostOptions& opt) {
    for (const auto& p : data.eigen.pairs)
        if (std::abs(p.lambda - k) <= 0.1) throw ContractError("resolvent trace needs dist(k, spectrum) > 0.1");
    if (k.imag() == 0.0 && k.real() >= 0.0) throw ContractError("resolvent trace needs k off the spectrum");
    JostOptions jo = opt;
    jo.eigenvalues = data.eigen.lambdas();
    jo.eig_exclusion = 0.1;
    const CVec m0 = solve_m0(g, q, SpectralParam::off(k), jo).m;
    return resolvent_trace_from_m0(g, q, data, k, m0);
}

SokhotskiCheck sokhotski_check(const ScatteringData& data, const Grid& g, const CVec& q, size_t index) {
    if (data.m0_minus.size() != data.lambda.size()) throw ContractError("the sweep did not keep m_0(lam - 0i)");
    const size_t n = data.lambda.size();
    if (n < 4 || index >= n) throw ContractError("Sokhotski check needs an interior sweep index");
    if (std::abs(data.lambda[0]) > 1e-12) throw ContractError("Sokhotski check needs a sweep starting at 0");
    const double h = data.lambda[1] - data.lambda[0];
    for (size_t i = 1; i < n; ++i)
        if (std::abs(data.lambda[i] - data.lambda[i - 1] - h) > 1e-9 * h)
            throw ContractError("Sokhotski check needs a uniform lambda grid");
    int M = 16;
    while (M < 4 * static_cast<int>(n)) M *= 2;
    // periodic lambda grid [-M h / 2, M h / 2); sweep node i sits at index i0 + i
    const int i0 = M / 2;
    Grid lg(0.5 * M * h, M);
    CVec f = CVec::Zero(M);
    for (size_t i = 0; i < n; ++i) f[i0 + static_cast<int>(i)] = std::norm(data.beta[i]);
    const CVec cm = cminus(lg, f);
    SokhotskiCheck s;
    s.lambda = data.lambda[index];
    s.lhs = integrate(g, q.conjugate().cwiseProduct(data.m0_minus[index]));
    cplx pt = 0.0;
    for (const auto& p : data.eigen.pairs) pt += 1.0 / (p.lambda - s.lambda);
    s.rhs = -kI * cm[i0 + static_cast<int>(index)] + 2.0 * kPi * pt;
    s.relative_error = std::abs(s.lhs - s.rhs) / std::max(std::abs(s.rhs), 1e-300);
    return s;
}

}  // namespace cmscat
