#include "cmscat/free_resolvent.hpp"

#include <algorithm>
#include <cmath>

#include "cmscat/errors.hpp"

namespace cmscat {

namespace {

// Above this value of |Im k| L the exponentials in the cumulative form
// start to lose digits, and the periodic resolvent with an image term
// takes over.
constexpr double kCumulativeLimit = 2.0;

CVec periodic_resolvent(const Grid& g, cplx k, const CVec& f) {
    CVec F = fft(f);
    for (int m = 0; m < g.N(); ++m) F[m] /= (g.xi(m) - k);
    return ifft(F);
}

}  // namespace

std::string side_name(Side s) {
    switch (s) {
        case Side::Upper: return "+0i";
        case Side::Lower: return "-0i";
        default: return "off-axis";
    }
}

Side parse_side(const std::string& s) {
    if (s == "+0i" || s == "+" || s == "upper") return Side::Upper;
    if (s == "-0i" || s == "-" || s == "lower") return Side::Lower;
    if (s == "off-axis" || s == "off") return Side::OffAxis;
    throw ConfigError("unknown side '" + s + "'");
}

SpectralParam SpectralParam::axis(double lam, Side side) {
    SpectralParam p{cplx(lam, 0.0), side};
    p.validate();
    return p;
}

SpectralParam SpectralParam::off(cplx k) {
    SpectralParam p{k, Side::OffAxis};
    p.validate();
    return p;
}

Side SpectralParam::kernel_side() const {
    if (side != Side::OffAxis) return side;
    return k.imag() < 0.0 ? Side::Lower : Side::Upper;
}

void SpectralParam::validate() const {
    if (!std::isfinite(k.real()) || !std::isfinite(k.imag()))
        throw ContractError("spectral parameter is not finite");
    if (side == Side::OffAxis) {
        if (k.imag() == 0.0 && k.real() >= 0.0)
            throw ContractError("k on [0, inf) needs a side (+0i or -0i)");
    } else if (k.imag() != 0.0) {
        throw ContractError("side +-0i is only meaningful for real k");
    }
}

CVec cumulative_integral(const Grid& g, const CVec& h) {
    const int N = g.N();
    CVec H = fft(h);
    const cplx mean = H[0] / static_cast<double>(N);
    H[0] = 0.0;
    H[N / 2] = 0.0;
    for (int m = 1; m < N; ++m)
        if (m != N / 2) H[m] /= kI * g.xi(m);
    CVec P = ifft(H);
    const cplx p0 = P[0];
    for (int i = 0; i < N; ++i) P[i] += mean * (g.x(i) + g.L()) - p0;
    return P;
}

CVec r0(const Grid& g, cplx k, Side side, const CVec& f) {
    const int N = g.N();
    const double L = g.L();
    const bool upper = side != Side::Lower;
    if (std::abs(k.imag()) * L <= kCumulativeLimit) {
        CVec h(N);
        for (int i = 0; i < N; ++i) h[i] = std::exp(-kI * k * g.x(i)) * f[i];
        CVec I = cumulative_integral(g, h);
        CVec out(N);
        if (upper) {
            for (int i = 0; i < N; ++i) out[i] = kI * std::exp(kI * k * g.x(i)) * I[i];
        } else {
            const cplx total = integrate(g, h);
            for (int i = 0; i < N; ++i) out[i] = -kI * std::exp(kI * k * g.x(i)) * (total - I[i]);
        }
        return out;
    }
    // Periodic resolvent plus the homogeneous solution that restores the
    // boundary condition at -L (upper) or +L (lower).
    CVec out = periodic_resolvent(g, k, f);
    if (upper) {
        const cplx rho = std::exp(2.0 * kI * k * L);
        cplx Fk = 0.0;
        for (int i = 0; i < N; ++i) Fk += std::exp(kI * k * (L - g.x(i))) * f[i];
        Fk *= g.dx();
        for (int i = 0; i < N; ++i) out[i] -= kI * std::exp(kI * k * (L + g.x(i))) * Fk / (1.0 - rho);
    } else {
        const cplx rho = std::exp(-2.0 * kI * k * L);
        cplx Fk = 0.0;
        for (int i = 0; i < N; ++i) Fk += std::exp(-kI * k * (L + g.x(i))) * f[i];
        Fk *= g.dx();
        for (int i = 0; i < N; ++i) out[i] += kI * std::exp(kI * k * (g.x(i) - L)) * Fk / (1.0 - rho);
    }
    return out;
}

ResolventOutput apply_R0(const Grid& g, const SpectralParam& p, const CVec& f, double boundary_tol) {
    p.validate();
    const Side s = p.kernel_side();
    ResolventOutput out;
    out.f = r0(g, p.k, s, f);
    const double mx = f.cwiseAbs().maxCoeff();
    const double edge = s == Side::Lower ? std::abs(f[g.N() - 1]) : std::abs(f[0]);
    out.boundary_warning = mx > 0.0 && edge > boundary_tol * mx;
    return out;
}

CVec apply_Tk(const Grid& g, const SpectralParam& p, const CVec& q, const CVec& m) {
    p.validate();
    CVec inner = cplus(g, q.conjugate().cwiseProduct(m));
    return r0(g, p.k, p.kernel_side(), q.cwiseProduct(inner));
}

CVec apply_Tk_minus(const Grid& g, const SpectralParam& p, const CVec& q, const CVec& m) {
    p.validate();
    CVec inner = cminus(g, q.conjugate().cwiseProduct(m));
    return r0(g, p.k, p.kernel_side(), q.cwiseProduct(inner));
}

CVec apply_Sk(const Grid& g, const SpectralParam& p, const CVec& q, const CVec& m) {
    p.validate();
    CVec v = q.cwiseAbs2().cast<cplx>().cwiseProduct(m);
    return r0(g, p.k, p.kernel_side(), v);
}

CVec shifted_cplus(const Grid& g, const CVec& f, double lam) {
    // each mode keeps the fraction of its lattice cell lying above -lam
    CVec F = fft(f);
    for (int m = 0; m < g.N(); ++m) {
        const double s = (g.xi(m) + lam) / g.dxi() + 0.5;
        F[m] *= std::clamp(s, 0.0, 1.0);
    }
    return ifft(F);
}

CVec gauged_K(const Grid& g, double lam, Side side, const CVec& q, const CVec& n) {
    CVec h = q.cwiseProduct(shifted_cplus(g, q.conjugate().cwiseProduct(n), lam));
    CVec I = cumulative_integral(g, h);
    if (side == Side::Lower) {
        const cplx total = integrate(g, h);
        return -kI * (CVec::Constant(g.N(), total) - I);
    }
    return kI * I;
}

}  // namespace cmscat
