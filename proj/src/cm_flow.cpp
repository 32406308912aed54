#include "cmscat/cm_flow.hpp"

#include <cmath>
#include <filesystem>
#include <sstream>

#include "cmscat/errors.hpp"
#include "cmscat/trace_formulas.hpp"

namespace cmscat {

namespace {

// 2 q C_+ d/dx(|q|^2). With q on the modes [0, N/2) every product below has
// true frequencies in (-N, N) and never wraps onto a retained mode, so the
// projected term is the exact Galerkin nonlinearity. Returns the projected
// term and reports the relative size of the discarded part.
CVec nonlinear(const Grid& g, const CVec& q, double* discarded) {
    const CVec u = q.cwiseAbs2().cast<cplx>();
    const CVec full = 2.0 * q.cwiseProduct(cplus(g, derivative(g, u)));
    CVec F = fft(full);
    const int h = g.hardy_modes();
    const double tot = F.squaredNorm();
    const double out = F.tail(g.N() - h).squaredNorm();
    if (discarded) *discarded = std::max(*discarded, tot > 0.0 ? std::sqrt(out / tot) : 0.0);
    F.tail(g.N() - h).setZero();
    return ifft(F);
}

class Propagator {
public:
    Propagator(const Grid& g, double dt) : g_(g), half_(g.N()), full_(g.N()) {
        for (int m = 0; m < g.N(); ++m) {
            const double xi = g.xi(m);
            half_[m] = std::exp(cplx(0.0, -xi * xi * 0.5 * dt));
            full_[m] = half_[m] * half_[m];
        }
    }
    CVec half(const CVec& v) const { return ifft(CVec(fft(v).cwiseProduct(half_))); }
    CVec full(const CVec& v) const { return ifft(CVec(fft(v).cwiseProduct(full_))); }

private:
    const Grid& g_;
    CVec half_, full_;
};

CVec step(const Grid& g, const Propagator& P, const CVec& q, double dt, double* discarded) {
    const CVec a = dt * nonlinear(g, q, discarded);
    const CVec Eq = P.half(q);
    const CVec b = dt * nonlinear(g, CVec(P.half(CVec(q + 0.5 * a))), discarded);
    const CVec c = dt * nonlinear(g, CVec(Eq + 0.5 * b), discarded);
    const CVec d = dt * nonlinear(g, CVec(P.half(Eq) + P.half(c)), discarded);
    return P.full(q) + (P.full(a) + 2.0 * P.half(CVec(b + c)) + d) / 6.0;
}

double unwrap_step(double prev, double next) {
    double d = next - prev;
    d -= 2.0 * kPi * std::round(d / (2.0 * kPi));
    return prev + d;
}

}  // namespace

CVec cm_rhs(const Grid& g, const CVec& q) {
    const CVec lin = kI * derivative(g, derivative(g, q));
    return hardy_project(g, CVec(lin + nonlinear(g, hardy_project(g, q), nullptr)));
}

void analyse_snapshot(const Grid& g, Snapshot& s, const EvolveOptions& opt) {
    s.mass = norm2(g, s.q);
    s.hamiltonian = lax_moment(g, s.q, 1).real();
    s.moment2 = lax_moment(g, s.q, 2).real();
    JostOptions jo = opt.jost;
    if (opt.track_spectrum || opt.track_gamma) {
        const LaxGalerkin lg = lax_eigensystem(g, s.q);
        const DiscreteSpectrum spec = discrete_spectrum(lg, s.q);
        s.eigenvalues = spec.lambdas();
        jo.eigenvalues = s.eigenvalues;
        if (opt.track_gamma) {
            for (int j = 0; j < spec.count(); ++j) {
                GammaOptions go;
                go.delta0 = 0.1 * spectral_gap(lg, spec.pairs[j].lambda);
                s.gammas.push_back(extract_gamma(g, lg, spec, j, go).gamma);
            }
        }
    }
    for (double lam : opt.beta_lambdas) {
        const JostSolution lo = solve_me(g, s.q, lam, Side::Lower, jo);
        s.betas.push_back(beta_from_me(g, s.q, lo.m));
        const JostSolution up = solve_me(g, s.q, lam, Side::Upper, jo);
        s.Gammas.push_back(gamma_from_me(g, s.q, lam, up.m));
    }
}

Trajectory evolve(const Grid& g, const CVec& q0, double T, double dt, const EvolveOptions& opt) {
    if (!(dt != 0.0) || !std::isfinite(dt)) throw ConfigError("evolve needs a finite nonzero dt");
    if (!(T >= 0.0)) throw ConfigError("evolve needs T >= 0");
    if (opt.snapshot_every < 1) throw ConfigError("snapshot_every must be >= 1");
    if (!(opt.safety > 0.0 && opt.safety <= 1.0)) throw ConfigError("safety must lie in (0, 1]");
    if (!(opt.mass_tol > 0.0) || !(opt.hardy_tol > 0.0) || !(opt.cfl > 0.0))
        throw ConfigError("evolve tolerances must be positive");
    if (q0.size() != g.N()) throw ConfigError("initial data does not match the grid");

    Trajectory tr{g, dt, opt.beta_lambdas, {}, {}};
    CVec q = hardy_project(g, q0);
    const double m0 = norm2(g, q);
    if (m0 >= 2.0 * kPi * opt.safety) {
        std::ostringstream os;
        os << "initial mass " << m0 << " is not below 2 pi * safety = " << 2.0 * kPi * opt.safety
           << "; global well-posedness is only known under ||q||_2^2 < 2 pi";
        if (!opt.allow_supercritical) throw ConfigError(os.str());
        tr.warnings.push_back(os.str() + " (override active)");
    }
    const double xi_max = g.xi(g.hardy_modes() - 1);
    const double cfl = std::abs(dt) * xi_max * 2.0 * q.cwiseAbs2().maxCoeff();
    if (cfl > opt.cfl) {
        std::ostringstream os;
        os << "dt * xi_max * 2 max|q|^2 = " << cfl << " exceeds the bound " << opt.cfl;
        throw ConfigError(os.str());
    }

    const long steps = std::lround(T / std::abs(dt));
    if (std::abs(steps * std::abs(dt) - T) > 1e-9 * std::max(1.0, T))
        tr.warnings.push_back("T is not a multiple of |dt|; the run stops at " + format_double(steps * std::abs(dt)));
    const Propagator P(g, dt);
    double discarded = 0.0;

    auto snap = [&](long n) {
        Snapshot s;
        s.t = n * dt;
        s.q = q;
        s.projection = discarded;
        discarded = 0.0;
        analyse_snapshot(g, s, opt);
        tr.snapshots.push_back(std::move(s));
    };
    snap(0);
    for (long n = 1; n <= steps; ++n) {
        q = step(g, P, q, dt, &discarded);
        const double res = hardy_residual(g, q);
        if (res > opt.hardy_tol) {
            std::ostringstream os;
            os << "Hardy residual " << res << " at step " << n << " exceeds " << opt.hardy_tol;
            throw ContractError(os.str());
        }
        const double m = norm2(g, q);
        if (!std::isfinite(m) || std::abs(m - m0) > opt.mass_tol * m0 + 1e-300) {
            std::ostringstream os;
            os << "mass drift " << std::abs(m - m0) / std::max(m0, 1e-300) << " (relative) at t = " << n * dt
               << " exceeds " << opt.mass_tol << "; reduce dt or refine the grid";
            throw ContractError(os.str());
        }
        if (n % opt.snapshot_every == 0 || n == steps) snap(n);
    }
    return tr;
}

double fit_slope(const std::vector<double>& t, const std::vector<double>& y) {
    const size_t n = t.size();
    if (n < 2 || y.size() != n) return std::numeric_limits<double>::quiet_NaN();
    double mt = 0.0, my = 0.0;
    for (size_t i = 0; i < n; ++i) {
        mt += t[i];
        my += y[i];
    }
    mt /= n;
    my /= n;
    double sxy = 0.0, sxx = 0.0;
    for (size_t i = 0; i < n; ++i) {
        sxy += (t[i] - mt) * (y[i] - my);
        sxx += (t[i] - mt) * (t[i] - mt);
    }
    return sxy / sxx;
}

double peak_position(const Grid& g, const CVec& q) {
    Eigen::Index i = 0;
    q.cwiseAbs().maxCoeff(&i);
    const int N = g.N();
    const double a = std::abs(q[(i + N - 1) % N]), b = std::abs(q[i]), c = std::abs(q[(i + 1) % N]);
    const double den = a - 2.0 * b + c;
    const double off = den != 0.0 ? 0.5 * (a - c) / den : 0.0;
    return g.x(static_cast<int>(i)) + off * g.dx();
}

EvolutionReport scattering_evolution_check(const Trajectory& traj) {
    EvolutionReport r;
    const auto& S = traj.snapshots;
    if (S.empty()) return r;
    const Snapshot& s0 = S.front();
    std::vector<double> t;
    for (const auto& s : S) t.push_back(s.t);
    auto rel = [](double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); };
    for (const auto& s : S) {
        r.mass_drift = std::max(r.mass_drift, rel(s.mass, s0.mass));
        r.hamiltonian_drift = std::max(r.hamiltonian_drift, rel(s.hamiltonian, s0.hamiltonian));
        r.moment2_drift = std::max(r.moment2_drift, rel(s.moment2, s0.moment2));
        if (s.eigenvalues.size() != s0.eigenvalues.size()) {
            r.eigenvalue_drift = std::numeric_limits<double>::infinity();
        } else {
            for (size_t j = 0; j < s.eigenvalues.size(); ++j)
                r.eigenvalue_drift = std::max(r.eigenvalue_drift, std::abs(s.eigenvalues[j] - s0.eigenvalues[j]));
        }
    }
    for (size_t l = 0; l < traj.beta_lambdas.size(); ++l) {
        const double lam = traj.beta_lambdas[l];
        std::vector<double> ph;
        double prev = 0.0;
        for (const auto& s : S) {
            r.beta_modulus_drift =
                std::max(r.beta_modulus_drift, rel(std::abs(s.betas[l]), std::abs(s0.betas[l])));
            r.Gamma_drift = std::max(r.Gamma_drift, std::abs(s.Gammas[l] - s0.Gammas[l]));
            prev = ph.empty() ? std::arg(s.betas[l] / s0.betas[l]) : unwrap_step(prev, std::arg(s.betas[l] / s0.betas[l]));
            ph.push_back(prev);
        }
        const double slope = fit_slope(t, ph);
        r.phase_slopes.push_back(slope);
        r.phase_slope_error = std::max(r.phase_slope_error, std::abs(slope + lam * lam) / (lam * lam));
    }
    bool same = true;
    for (const auto& s : S) same = same && s.gammas.size() == s0.gammas.size();
    if (same) {
        for (size_t j = 0; j < s0.gammas.size(); ++j) {
            std::vector<double> y;
            for (const auto& s : S) y.push_back(s.gammas[j].real());
            const double slope = fit_slope(t, y);
            r.gamma_slopes.push_back(slope);
            const double expect = -2.0 * s0.eigenvalues[j];
            r.gamma_slope_error = std::max(r.gamma_slope_error, std::abs(slope - expect) / std::abs(expect));
        }
    } else {
        r.gamma_slope_error = std::numeric_limits<double>::infinity();
    }
    return r;
}

void save_trajectory(const Trajectory& traj, const std::string& dir, const json& extra) {
    namespace fs = std::filesystem;
    fs::create_directories(dir);
    json man = json::object();
    man["grid"] = {{"L", traj.grid.L()}, {"N", traj.grid.N()}};
    man["dt"] = traj.dt;
    man["beta_lambdas"] = traj.beta_lambdas;
    man["warnings"] = traj.warnings;
    json snaps = json::array();
    for (size_t i = 0; i < traj.snapshots.size(); ++i) {
        const Snapshot& s = traj.snapshots[i];
        std::ostringstream name;
        name << "q_" << i << ".csv";
        write_text((fs::path(dir) / name.str()).string(), grid_function_csv(traj.grid, s.q));
        json js = {{"t", s.t},
                   {"file", name.str()},
                   {"mass", s.mass},
                   {"hamiltonian", s.hamiltonian},
                   {"moment2", s.moment2},
                   {"projection", s.projection},
                   {"eigenvalues", s.eigenvalues}};
        json g = json::array(), b = json::array(), G = json::array();
        for (cplx z : s.gammas) g.push_back({z.real(), z.imag()});
        for (cplx z : s.betas) b.push_back({z.real(), z.imag()});
        for (cplx z : s.Gammas) G.push_back({z.real(), z.imag()});
        js["gammas"] = g;
        js["betas"] = b;
        js["Gammas"] = G;
        snaps.push_back(js);
    }
    man["snapshots"] = snaps;
    for (auto it = extra.begin(); it != extra.end(); ++it) man[it.key()] = it.value();
    write_text((fs::path(dir) / "manifest.json").string(), dump_json(man));
}

}  // namespace cmscat
