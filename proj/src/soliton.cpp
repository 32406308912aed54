#include "cmscat/soliton.hpp"

#include <cmath>
#include <sstream>

#include "cmscat/errors.hpp"

namespace cmscat {

namespace {

void check_excluded(double eta, cplx k) {
    if (std::abs(k - eta) < 1e-12) throw ExceptionalPointError("soliton closed forms exclude k = eta");
}

}  // namespace

cplx q_eta(double eta, double x) { return std::sqrt(2.0) * std::exp(kI * eta * x) / (x + kI); }

CVec soliton_samples(const SolitonParams& p, const Grid& g) {
    if (!(p.scale > 0.0)) throw ConfigError("soliton scale must be positive");
    const double s = p.scale;
    const cplx phase = std::exp(kI * (p.theta + p.eta * p.eta * s * s * p.t));
    CVec q(g.N());
    for (int i = 0; i < g.N(); ++i) q[i] = std::sqrt(s) * phase * q_eta(p.eta, s * (g.x(i) - 2.0 * p.eta * s * p.t) + p.shift);
    return q;
}

HardyFunction soliton_q(const SolitonParams& p, const Grid& g, std::vector<std::string>* warnings) {
    CVec raw = soliton_samples(p, g);
    if (warnings) {
        const double edge = boundary_magnitude(raw);
        if (edge > 1e-8) {
            std::ostringstream os;
            os << "soliton tail at +-L is " << edge << " of the peak; errors of order 1/L are expected";
            warnings->push_back(os.str());
        }
    }
    return make_hardy(g, raw);
}

CVec soliton_me(double eta, double lam, const Grid& g) {
    check_excluded(eta, lam);
    CVec m(g.N());
    for (int i = 0; i < g.N(); ++i) {
        const double x = g.x(i);
        m[i] = std::exp(kI * lam * x);
        if (lam > eta) m[i] *= (x - kI) / (x + kI);
    }
    return m;
}

CVec soliton_m0(double eta, cplx k, const Grid& g) {
    check_excluded(eta, k);
    CVec m(g.N());
    for (int i = 0; i < g.N(); ++i) m[i] = -q_eta(eta, g.x(i)) / (k - eta);
    return m;
}

SolitonScattering soliton_scattering(double eta, const Grid& g) {
    SolitonScattering s;
    s.lambda1 = eta;
    s.phi1.resize(g.N());
    for (int i = 0; i < g.N(); ++i) s.phi1[i] = -kI * q_eta(eta, g.x(i));
    return s;
}

}  // namespace cmscat
