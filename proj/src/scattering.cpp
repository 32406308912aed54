#include "cmscat/scattering.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "cmscat/errors.hpp"
#include "cmscat/free_resolvent.hpp"

namespace cmscat {

namespace {

// Lagrange interpolation through up to four valid neighbours of index i.
template <class T>
void fill_flagged(const std::vector<double>& x, std::vector<T>& y, const std::vector<bool>& flagged) {
    const int n = static_cast<int>(x.size());
    for (int i = 0; i < n; ++i) {
        if (!flagged[i]) continue;
        std::vector<int> nodes;
        for (int j = i - 1; j >= 0 && nodes.size() < 2; --j)
            if (!flagged[j]) nodes.push_back(j);
        for (int j = i + 1; j < n && nodes.size() < 4; ++j)
            if (!flagged[j]) nodes.push_back(j);
        for (int j = i - 1; j >= 0 && nodes.size() < 4; --j)
            if (!flagged[j] && std::find(nodes.begin(), nodes.end(), j) == nodes.end()) nodes.push_back(j);
        if (nodes.empty()) continue;
        T acc = y[nodes[0]] * 0.0;
        for (int a : nodes) {
            double w = 1.0;
            for (int b : nodes)
                if (b != a) w *= (x[i] - x[b]) / (x[a] - x[b]);
            acc = acc + y[a] * w;
        }
        y[i] = acc;
    }
}

}  // namespace

double spectral_gap(const LaxGalerkin& lg, double lam) {
    double gap = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < lg.eig.values.size(); ++i) {
        const double d = std::abs(lg.eig.values[i] - lam);
        if (d > 1e-12) gap = std::min(gap, d);
    }
    return gap;
}

cplx gamma_from_me(const Grid& g, const CVec& q, double lam, const CVec& me_plus) {
    CVec n = plane_wave(g, -lam).cwiseProduct(me_plus);
    CVec h = q.cwiseProduct(shifted_cplus(g, q.conjugate().cwiseProduct(n), lam));
    return 1.0 + kI * integrate(g, h);
}

cplx beta_from_me(const Grid& g, const CVec& q, const CVec& me_minus) {
    return kI * std::conj(integrate(g, q.conjugate().cwiseProduct(me_minus)));
}

cplx beta_from_m0(const Grid& g, const CVec& q, double lam, const CVec& m0_plus) {
    const CVec ebar = plane_wave(g, -lam);
    CVec n = ebar.cwiseProduct(m0_plus);
    CVec h = q.cwiseProduct(shifted_cplus(g, q.conjugate().cwiseProduct(n), lam)) + ebar.cwiseProduct(q);
    return kI * integrate(g, h);
}

cplx gamma_matrix(const Grid& g, const CVec& q, double lam, const JostOptions& opt) {
    return gamma_from_me(g, q, lam, solve_me(g, q, lam, Side::Upper, opt).m);
}

BetaResult beta(const Grid& g, const CVec& q, double lam, const JostOptions& opt, double consistency_tol) {
    BetaResult r;
    r.beta = beta_from_me(g, q, solve_me(g, q, lam, Side::Lower, opt).m);
    r.beta_m0 = beta_from_m0(g, q, lam, solve_m0(g, q, SpectralParam::axis(lam, Side::Upper), opt).m);
    r.discrepancy = std::abs(r.beta - r.beta_m0);
    if (r.discrepancy > consistency_tol * (1.0 + std::abs(r.beta))) {
        std::ostringstream os;
        os << "beta forms disagree at lambda=" << lam << ": " << r.discrepancy;
        throw ConsistencyError(os.str());
    }
    return r;
}

std::vector<double> uniform_lambda_grid(double lambda_max, double spacing) {
    if (!(spacing > 0.0) || !(lambda_max >= 0.0)) throw ConfigError("lambda grid needs spacing > 0, max >= 0");
    std::vector<double> v;
    const int n = static_cast<int>(std::floor(lambda_max / spacing + 1e-9));
    for (int i = 0; i <= n; ++i) v.push_back(i * spacing);
    return v;
}

ScatteringData scattering_sweep(const Grid& g, const CVec& q, const std::vector<double>& lambda_grid,
                                const SweepOptions& opt) {
    LaxGalerkin lg = lax_eigensystem(g, q);
    DiscreteSpectrum spec = discrete_spectrum(lg, q);
    return scattering_sweep(g, q, lambda_grid, lg, spec, opt);
}

ScatteringData scattering_sweep(const Grid& g, const CVec& q, const std::vector<double>& lambda_grid,
                                const LaxGalerkin& lg, const DiscreteSpectrum& spec, const SweepOptions& opt) {
    for (size_t i = 1; i < lambda_grid.size(); ++i)
        if (!(lambda_grid[i] > lambda_grid[i - 1])) throw ConfigError("lambda grid must increase");
    if (!lambda_grid.empty() && lambda_grid.front() < 0.0) throw ConfigError("lambda grid must be nonnegative");

    ScatteringData d;
    d.lambda = lambda_grid;
    d.eigen = spec;
    const size_t n = lambda_grid.size();
    d.beta.assign(n, 0.0);
    d.beta_m0.assign(n, 0.0);
    d.Gamma.assign(n, 1.0);
    d.flagged.assign(n, false);
    JostOptions jo = opt.jost;
    jo.eigenvalues = spec.lambdas();
    const CVec zero = CVec::Zero(g.N());
    if (opt.keep_me_minus) d.me_minus.assign(n, zero);
    if (opt.keep_me_plus) d.me_plus.assign(n, zero);
    if (opt.keep_m0) {
        d.m0_plus.assign(n, zero);
        d.m0_minus.assign(n, zero);
    }

    const double excl = jo.exclusion(g);
    for (size_t i = 0; i < n; ++i) {
        const double lam = lambda_grid[i];
        bool excluded = false;
        for (double lj : jo.eigenvalues) excluded = excluded || std::abs(lam - lj) < excl;
        if (excluded) {
            d.flagged[i] = true;
            continue;
        }
        try {
            const JostSolution mm = solve_me(g, q, lam, Side::Lower, jo);
            d.beta[i] = beta_from_me(g, q, mm.m);
            if (opt.keep_me_minus) d.me_minus[i] = mm.m;
            if (opt.beta_only) {
                d.beta_m0[i] = d.beta[i];
                continue;
            }
            const JostSolution mp = solve_me(g, q, lam, Side::Upper, jo);
            const JostSolution zp = solve_m0(g, q, SpectralParam::axis(lam, Side::Upper), jo);
            d.Gamma[i] = gamma_from_me(g, q, lam, mp.m);
            d.beta_m0[i] = beta_from_m0(g, q, lam, zp.m);
            const double disc = std::abs(d.beta[i] - d.beta_m0[i]);
            if (disc > opt.consistency_tol * (1.0 + std::abs(d.beta[i]))) {
                std::ostringstream os;
                os << "lambda=" << lam << ": beta forms disagree by " << disc;
                d.errors.push_back(os.str());
            }
            if (opt.keep_me_plus) d.me_plus[i] = mp.m;
            if (opt.keep_m0) {
                d.m0_plus[i] = zp.m;
                d.m0_minus[i] = solve_m0(g, q, SpectralParam::axis(lam, Side::Lower), jo).m;
            }
        } catch (const std::exception& e) {
            d.flagged[i] = true;
            std::ostringstream os;
            os << "lambda=" << lam << ": " << e.what();
            d.errors.push_back(os.str());
        }
    }
    fill_flagged(d.lambda, d.beta, d.flagged);
    fill_flagged(d.lambda, d.beta_m0, d.flagged);
    fill_flagged(d.lambda, d.Gamma, d.flagged);
    if (opt.keep_me_minus) fill_flagged(d.lambda, d.me_minus, d.flagged);
    if (opt.keep_me_plus) fill_flagged(d.lambda, d.me_plus, d.flagged);
    if (opt.keep_m0) {
        fill_flagged(d.lambda, d.m0_plus, d.flagged);
        fill_flagged(d.lambda, d.m0_minus, d.flagged);
    }

    if (opt.extract_gammas) {
        for (int j = 0; j < spec.count(); ++j) {
            GammaOptions go;
            go.delta0 = opt.delta0 > 0.0 ? opt.delta0 : 0.1 * spectral_gap(lg, spec.pairs[j].lambda);
            try {
                d.gamma_consts.push_back(extract_gamma(g, lg, spec, j, go).gamma);
            } catch (const std::exception& e) {
                d.gamma_consts.push_back(std::numeric_limits<double>::quiet_NaN());
                d.errors.push_back(std::string("gamma_") + std::to_string(j) + ": " + e.what());
            }
        }
    }
    return d;
}

GammaExtraction extract_gamma(const Grid& g, const LaxGalerkin& lg, const DiscreteSpectrum& spec, int j,
                              const GammaOptions& opt) {
    if (j < 0 || j >= spec.count()) throw ContractError("eigenpair index out of range");
    if (opt.levels < 2 || !(opt.delta0 > 0.0)) throw ConfigError("gamma extraction needs delta0 > 0 and >= 2 levels");
    const EigenPair& ej = spec.pairs[j];
    const CVec q = [&] {
        CVec c = CVec::Zero(g.N());
        c.head(g.hardy_modes()) = lg.q_modes;
        return ifft(c);
    }();
    const double sgn = opt.upper ? 1.0 : -1.0;
    std::vector<cplx> ks;
    std::vector<CVec> m0s;
    for (int m = 0; m < opt.levels; ++m) {
        ks.push_back(cplx(ej.lambda, sgn * opt.delta0 * std::ldexp(1.0, -m)));
        m0s.push_back(galerkin_resolvent(lg, ks.back(), q));
    }
    // residue by first-order Richardson on (k - lam_j) m_0(k)
    const int L = opt.levels;
    CVec r_fine = (ks[L - 1] - ej.lambda) * m0s[L - 1];
    CVec r_coarse = (ks[L - 2] - ej.lambda) * m0s[L - 2];
    GammaExtraction out;
    out.residue = 2.0 * r_fine - r_coarse;
    out.residue_error = (out.residue + kI * ej.phi).norm() / ej.phi.norm();

    const double nphi = norm2(g, ej.phi);
    CVec xphi = g.xs().cast<cplx>().cwiseProduct(ej.phi);
    CVec others = CVec::Zero(g.N());
    for (int jp = 0; jp < spec.count(); ++jp)
        if (jp != j) others += kI * spec.pairs[jp].phi / (ej.lambda - spec.pairs[jp].lambda);
    for (int m = 0; m < L; ++m) {
        CVec h = m0s[m] - out.residue / (ks[m] - ej.lambda);
        for (int jp = 0; jp < spec.count(); ++jp)
            if (jp != j) h += kI * spec.pairs[jp].phi / (ks[m] - spec.pairs[jp].lambda);
        out.estimates.push_back(inner(g, CVec(h - xphi - others), ej.phi) / nphi);
    }
    std::vector<cplx> rich;
    for (int m = 0; m + 1 < L; ++m) rich.push_back(2.0 * out.estimates[m + 1] - out.estimates[m]);
    out.gamma = rich.back();
    if (rich.size() >= 2) {
        const double jump = std::abs(rich.back() - rich[rich.size() - 2]);
        if (jump > opt.divergence_tol * (1.0 + std::abs(out.gamma))) {
            std::ostringstream os;
            os << "gamma extrapolation does not settle (successive estimates differ by " << jump << ")";
            throw PoleExtractionError(os.str());
        }
    }
    return out;
}

}  // namespace cmscat
