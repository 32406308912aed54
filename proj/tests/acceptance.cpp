// Acceptance suite: one PASS/FAIL line per criterion with the measured values.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <map>
#include <memory>
#include <sstream>
#include <string>

#include "cmscat/cm_flow.hpp"
#include "cmscat/potentials.hpp"
#include "cmscat/soliton.hpp"
#include "cmscat/spectral_transform.hpp"
#include "cmscat/trace_formulas.hpp"

using namespace cmscat;

namespace {

constexpr double kL = 60.0;
constexpr int kN = 4096;

struct Outcome {
    bool pass = true;
    std::ostringstream detail;
    void require(bool ok, const std::string& name, double value, double tol) {
        pass = pass && ok;
        detail << ' ' << name << '=' << value;
        if (!ok) detail << "(>" << tol << ")";
        detail << ';';
    }
    void note(const std::string& name, double value) { detail << ' ' << name << '=' << value << ';'; }
    void at_most(const std::string& name, double value, double tol) {
        require(std::isfinite(value) && value <= tol, name, value, tol);
    }
};

double sup(const CVec& v) { return v.cwiseAbs().maxCoeff(); }

double sup_interior(const Grid& g, const CVec& v, double frac) {
    double m = 0.0;
    for (int i = 0; i < g.N(); ++i)
        if (std::abs(g.x(i)) <= frac * g.L()) m = std::max(m, std::abs(v[i]));
    return m;
}

CVec gauss_q(const Grid& g) { return gaussian_frequency(g, 2.0, 0.5, kPi); }
CVec rat2_q(const Grid& g) { return rational_hardy(g, 2.5 * kPi, 1.0); }

// Cached eigensystems keyed by potential name and grid size.
struct Cached {
    CVec q;
    std::unique_ptr<LaxGalerkin> lg;
    DiscreteSpectrum spec;
};
std::map<std::string, Cached> cache;

Cached& cached(const std::string& name, int N) {
    const std::string key = name + "/" + std::to_string(N);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
    const Grid g(kL, N);
    Cached c;
    if (name == "gauss") c.q = gauss_q(g);
    else if (name == "rat2") c.q = rat2_q(g);
    else c.q = soliton_q(SolitonParams{}, g).f;
    c.lg = std::make_unique<LaxGalerkin>(lax_eigensystem(g, c.q));
    c.spec = discrete_spectrum(*c.lg, c.q);
    return cache.emplace(key, std::move(c)).first->second;
}

ScatteringData beta_sweep(const Grid& g, const Cached& c, double lam_max, double h, bool keep_me) {
    SweepOptions so;
    so.beta_only = true;
    so.keep_me_minus = keep_me;
    so.extract_gammas = false;
    return scattering_sweep(g, c.q, uniform_lambda_grid(lam_max, h), *c.lg, c.spec, so);
}

// 1. Soliton suite
void criterion1(Outcome& o) {
    const Grid g(kL, kN);
    Cached& c = cached("soliton", kN);
    o.require(c.spec.count() == 1, "count", c.spec.count(), 1);
    if (c.spec.count() < 1) return;
    const EigenPair& e = c.spec.pairs[0];
    o.at_most("|lam1-1|", std::abs(e.lambda - 1.0), 5e-3);
    o.at_most("|phi|^2-2pi", std::abs(norm2(g, e.phi) - 2.0 * kPi), 1e-3);
    JostOptions jo;
    jo.eigenvalues = c.spec.lambdas();
    double gdev = 0.0, bmax = 0.0;
    int pts = 0;
    for (int i = 0; pts < 64; ++i) {
        const double lam = 0.05 + 0.125 * i;
        if (std::abs(lam - 1.0) < jo.exclusion(g) + 0.05) continue;
        ++pts;
        gdev = std::max(gdev, std::abs(gamma_from_me(g, c.q, lam, solve_me(g, c.q, lam, Side::Upper, jo).m) - 1.0));
        bmax = std::max(bmax, std::abs(beta_from_me(g, c.q, solve_me(g, c.q, lam, Side::Lower, jo).m)));
    }
    o.at_most("max|Gamma-1|", gdev, 1e-6);
    o.at_most("max|beta|", bmax, 1e-6);
    double medev = 0.0;
    for (double lam : {0.5, 2.0, 4.0})
        for (Side s : {Side::Upper, Side::Lower})
            medev = std::max(medev, sup_interior(g, CVec(solve_me(g, c.q, lam, s, jo).m - soliton_me(1.0, lam, g)), 0.5));
    o.at_most("m_e_dev", medev, 1e-4);
    const CVec m0 = solve_m0(g, c.q, SpectralParam::off(kI), jo).m;
    o.at_most("m0(i)_dev", sup(CVec(m0 - soliton_m0(1.0, kI, g))), 1e-5);
}

// 2. Free field
void criterion2(Outcome& o) {
    const Grid g(kL, kN);
    const CVec q = CVec::Zero(kN);
    SweepOptions so;
    std::vector<double> lams;
    for (int m = 0; m < 200; ++m) lams.push_back(g.xi(m));
    const ScatteringData d = scattering_sweep(g, q, lams, so);
    const CVec f = gaussian_frequency(g, 1.5, 0.5, 1.0, 2.0);
    const DistortedSpectrum s = distorted_forward(g, d, f);
    const CVec F = fourier_forward(g, f);
    double fdev = 0.0;
    for (int m = 0; m < 200; ++m) fdev = std::max(fdev, std::abs(s.values[m] - F[m]));
    // off-lattice lambda against the direct Riemann sum
    for (double lam : {0.33, 1.71, 4.2}) {
        const JostSolution me = solve_me(g, q, lam, Side::Lower);
        const cplx phi = inner(g, f, me.m) / std::sqrt(2.0 * kPi);
        cplx direct = 0.0;
        for (int i = 0; i < kN; ++i) direct += f[i] * std::exp(cplx(0.0, -lam * g.x(i)));
        fdev = std::max(fdev, std::abs(phi - direct * g.dx() / std::sqrt(2.0 * kPi)));
    }
    o.at_most("|Phi-F|", fdev, 1e-10);
    double closure = 0.0;
    closure = std::max(closure, trace_first(g, q, d).closure_error);
    for (int n = 1; n <= 4; ++n) closure = std::max(closure, trace_higher(g, q, d, n).closure_error);
    for (cplx k : {cplx(0.0, 2.0), cplx(-3.0, 1.0)})
        closure = std::max(closure, resolvent_trace_check(g, q, d, k).closure_error);
    o.require(closure == 0.0, "trace_closures", closure, 0.0);
    double medev = 0.0;
    for (double lam : {0.0, 0.7, 3.1, 40.0})
        for (Side sd : {Side::Upper, Side::Lower})
            medev = std::max(medev, sup(CVec(solve_me(g, q, lam, sd).m - plane_wave(g, lam))));
    o.require(medev == 0.0, "m_e-e^{ilx}", medev, 0.0);
}

// 3. Unimodularity
void criterion3(Outcome& o) {
    const Grid g(kL, kN);
    for (const char* name : {"soliton", "gauss", "rat2"}) {
        Cached& c = cached(name, kN);
        JostOptions jo;
        jo.eigenvalues = c.spec.lambdas();
        double dev = 0.0;
        for (int i = 0; i < 40; ++i) {
            const double lam = 0.1 + 0.25 * i;
            bool excluded = false;
            for (double lj : jo.eigenvalues) excluded = excluded || std::abs(lam - lj) < jo.exclusion(g);
            if (excluded) continue;
            const cplx G = gamma_from_me(g, c.q, lam, solve_me(g, c.q, lam, Side::Upper, jo).m);
            dev = std::max(dev, std::abs(std::abs(G) - 1.0));
        }
        o.at_most(std::string("||Gamma|-1|_") + name, dev, 1e-6);
    }
}

// 4. Identity suite
void criterion4(Outcome& o) {
    const Grid g(kL, kN);
    Cached& c = cached("gauss", kN);
    o.require(c.spec.count() == 0, "count", c.spec.count(), 0);
    double ra = 0.0, rb = 0.0, rc = 0.0, rd = 0.0, cross = 0.0;
    for (double lam : {1.0, 1.5, 2.0, 2.5, 3.0}) {
        const CVec mep = solve_me(g, c.q, lam, Side::Upper).m;
        const CVec mem = solve_me(g, c.q, lam, Side::Lower).m;
        const CVec m0p = solve_m0(g, c.q, SpectralParam::axis(lam, Side::Upper)).m;
        const CVec m0m = solve_m0(g, c.q, SpectralParam::axis(lam, Side::Lower)).m;
        const cplx b = beta_from_me(g, c.q, mem);
        const cplx b0 = beta_from_m0(g, c.q, lam, m0p);
        const cplx G = gamma_from_me(g, c.q, lam, mep);
        ra = std::max(ra, sup(CVec(m0p - m0m - b * mem)) / (std::abs(b) * sup(mem)));
        rb = std::max(rb, sup(CVec(mep - G * mem)) / sup(mep));
        rc = std::max(rc, std::abs(kI * std::conj(b0) - integrate(g, c.q.conjugate().cwiseProduct(mem))) / std::abs(b0));
        rd = std::max(rd, std::abs(std::norm(b) - 2.0 * integrate(g, c.q.conjugate().cwiseProduct(m0p)).imag()) /
                              std::norm(b));
        cross = std::max(cross, std::abs(b - b0));
    }
    o.at_most("m0mebeta", ra, 1e-4);
    o.at_most("megamma", rb, 1e-4);
    o.at_most("fbeta", rc, 1e-4);
    o.at_most("betasq", rd, 1e-4);
    o.at_most("beta_cross", cross, 1e-5);
}

// 5. First trace formula under refinement
void criterion5(Outcome& o) {
    for (int N : {4096, 8192}) {
        const Grid g(kL, N);
        const double tol = N == 4096 ? 1e-2 : 3e-3;
        for (const char* name : {"gauss", "rat2"}) {
            Cached& c = cached(name, N);
            const ScatteringData d = beta_sweep(g, c, std::string(name) == "gauss" ? 8.0 : 25.0, 0.05, false);
            const TraceReport r = trace_first(g, c.q, d);
            o.at_most(std::string("closure_") + name + "_" + std::to_string(N), r.closure_error, tol);
        }
        cache.erase(std::string("gauss/") + std::to_string(N));
        if (N == 8192) cache.erase("rat2/8192");
    }
}

// 6. Higher trace formulas
void criterion6(Outcome& o) {
    const Grid g(kL, kN);
    for (const char* name : {"gauss", "rat2"}) {
        Cached& c = cached(name, kN);
        const ScatteringData d = beta_sweep(g, c, std::string(name) == "gauss" ? 8.0 : 25.0, 0.05, false);
        // Galerkin moments sum_i lam_i^n |<q, v_i>|^2 from the eigendecomposition
        const CVec qm = grid_to_modes(g, c.q);
        const CVec proj = c.lg->eig.vectors.adjoint() * qm;
        for (int n = 1; n <= 2; ++n) {
            const TraceReport r = trace_higher(g, c.q, d, n);
            o.at_most(std::string("closure_") + name + "_n" + std::to_string(n), r.closure_error, 2e-2);
            double eig_moment = 0.0;
            for (Eigen::Index i = 0; i < proj.size(); ++i)
                eig_moment += std::pow(c.lg->eig.values[i], n) * std::norm(proj[i]);
            eig_moment *= 2.0 * g.L();
            const double lhs = r.lhs.real();
            const double lax = lax_moment(g, c.q, n).real();
            const double expl = explicit_moment(g, c.q, n);
            const double dev = std::max({std::abs(lhs - lax), std::abs(lhs - eig_moment), std::abs(lhs - expl)}) /
                               std::abs(lhs);
            o.at_most(std::string("lhs_cross_") + name + "_n" + std::to_string(n), dev, 1e-8);
        }
    }
}

// 7. Resolvent trace identity
void criterion7(Outcome& o) {
    const Grid g(kL, kN);
    for (const char* name : {"gauss", "rat2"}) {
        Cached& c = cached(name, kN);
        const ScatteringData d = beta_sweep(g, c, std::string(name) == "gauss" ? 8.0 : 25.0, 0.05, false);
        for (cplx k : {cplx(0.0, 2.0), cplx(-3.0, 1.0)}) {
            const TraceReport r = resolvent_trace_check(g, c.q, d, k);
            std::ostringstream os;
            os << "closure_" << name << "_k" << k.real() << (k.imag() < 0 ? "" : "+") << k.imag() << "i";
            o.at_most(os.str(), r.closure_error, 1e-2);
        }
    }
    // soliton with its closed-form data (beta = 0, lambda_1 = 1, m_0 = -q/(k - 1)).
    // The lhs integral runs over the whole line through x = tan(theta / 2).
    for (cplx k : {cplx(0.0, 2.0), cplx(-3.0, 1.0)}) {
        const int M = 4096;
        cplx lhs = 0.0;
        for (int j = 0; j < M; ++j) {
            const double th = -kPi + 2.0 * kPi * (j + 0.5) / M;
            const double x = std::tan(0.5 * th);
            const cplx qx = q_eta(1.0, x);
            lhs += std::conj(qx) * (-qx / (k - 1.0)) * (0.5 / std::pow(std::cos(0.5 * th), 2));
        }
        lhs *= 2.0 * kPi / M;
        o.at_most("soliton_exact", closure(lhs, 0.0, 2.0 * kPi / (1.0 - k)), 1e-8);
        const CVec q = soliton_q(SolitonParams{}, g).f;
        o.note("soliton_grid", closure(integrate(g, q.conjugate().cwiseProduct(soliton_m0(1.0, k, g))), 0.0,
                                       2.0 * kPi / (1.0 - k)));
    }
}

// 8. High-energy asymptotics
void criterion8(Outcome& o) {
    const Grid g(kL, kN);
    const CVec q = rational_hardy(g, kPi, 0.25);
    const CVec phase = cumulative_integral(g, q.cwiseAbs2().cast<cplx>());
    double prev = std::numeric_limits<double>::infinity();
    bool decreasing = true;
    for (double lam : {10.0, 40.0, 160.0}) {
        const CVec me = solve_me(g, q, lam, Side::Upper).m;
        CVec ref(kN);
        for (int i = 0; i < kN; ++i) ref[i] = std::exp(kI * (lam * g.x(i) + phase[i].real()));
        const double dev = sup(CVec(me - ref));
        o.note("me_dev_" + std::to_string(static_cast<int>(lam)), dev);
        decreasing = decreasing && dev < prev;
        prev = dev;
    }
    o.require(decreasing, "decreasing", decreasing, 1);
    double worst = 0.0;
    for (cplx k : {cplx(0.0, 100.0), 100.0 * std::exp(cplx(0.0, 0.75 * kPi)), 100.0 * std::exp(cplx(0.0, -0.5 * kPi))}) {
        const CVec m0 = solve_m0(g, q, SpectralParam::off(k)).m;
        worst = std::max(worst, sup(CVec(k * m0 + q)) / sup(q));
    }
    o.at_most("|k m0+q|/|q|", worst, 0.05);
    const int M = 3;
    const auto cs = c_sequence(g, q, M);
    std::vector<double> lx, ly;
    for (double s : {10.0, 20.0, 40.0, 80.0}) {
        const cplx k(0.0, s);
        JostOptions jo;
        jo.gmres_rtol = 1e-15;
        jo.solve_tol = 1e-13;
        const CVec m0 = solve_m0(g, q, SpectralParam::off(k), jo).m;
        lx.push_back(std::log(s));
        ly.push_back(std::log(sup(CVec(m0 - c_expansion(cs, k, M)))));
    }
    const double slope = fit_slope(lx, ly);
    o.at_most("slope_err", std::abs(slope + (M + 1)) / (M + 1), 0.15);
    o.note("slope", slope);
}

// 9. Distorted transform
void criterion9(Outcome& o) {
    const Grid g(kL, kN);
    Cached& c = cached("rat2", kN);
    std::vector<double> lams;
    for (int m = 0; g.xi(m) <= 20.0; ++m) lams.push_back(g.xi(m));
    SweepOptions so;
    so.beta_only = true;
    so.extract_gammas = false;
    const ScatteringData d = scattering_sweep(g, c.q, lams, *c.lg, c.spec, so);
    o.note("flagged", std::count(d.flagged.begin(), d.flagged.end(), true));
    // transforms vanish smoothly at xi = 0, so the functions decay fast in x
    const CVec fs[3] = {gaussian_frequency(g, 2.5, 0.6, 1.0, 1.0), gaussian_frequency(g, 3.5, 0.8, 1.0, -3.0),
                        gaussian_frequency(g, 5.0, 1.0, 1.0, 4.0)};
    double rt = 0.0, diag = 0.0, pars = 0.0;
    for (const CVec& f : fs) {
        const DistortedSpectrum s = distorted_forward(g, d, f);
        rt = std::max(rt, norm_l2(g, CVec(distorted_inverse(g, d, s) - f)) / norm_l2(g, f));
        const DistortedSpectrum sl = distorted_forward(g, d, apply_lax(g, c.q, f));
        CVec lam_phi(s.values.size());
        for (Eigen::Index i = 0; i < lam_phi.size(); ++i) lam_phi[i] = s.lambda[i] * s.values[i];
        diag = std::max(diag, (sl.values - lam_phi).norm() / lam_phi.norm());
        pars = std::max(pars, plancherel(g, s, f, d).relative_error);
    }
    o.at_most("round_trip", rt, 1e-3);
    o.at_most("diag", diag, 1e-3);
    o.at_most("parseval", pars, 1e-3);
}

// 10. Reconstruction
void criterion10(Outcome& o) {
    const Grid g(kL, kN);
    Cached& c = cached("gauss", kN);
    std::vector<double> lams;
    for (int m = 0; g.xi(m) <= 8.0; ++m) lams.push_back(g.xi(m));
    SweepOptions so;
    so.beta_only = true;
    so.extract_gammas = false;
    const ScatteringData d = scattering_sweep(g, c.q, lams, *c.lg, c.spec, so);
    o.at_most("gauss_rel_err", reconstruct_q(g, d, c.q).relative_error, 2e-2);
    // soliton with closed-form data: beta = 0, phi_1 = -i q_eta
    const CVec q = soliton_samples(SolitonParams{}, g);
    ScatteringData sd;
    sd.lambda = {0.0, 1.0};
    sd.beta = {0.0, 0.0};
    sd.me_minus = {plane_wave(g, 0.0), plane_wave(g, 1.0)};
    sd.eigen.pairs.push_back({1.0, soliton_scattering(1.0, g).phi1, 1.0});
    o.at_most("soliton_rel_err", reconstruct_q(g, sd, q).relative_error, 1e-8);
}

// 11. Evolution
void criterion11(Outcome& o) {
    const Grid g(kL, 2048);
    EvolveOptions eo;
    eo.allow_supercritical = true;
    eo.snapshot_every = 100;
    eo.mass_tol = 1e-5;
    const CVec qs = soliton_q(SolitonParams{}, g).f;
    const Trajectory ts = evolve(g, qs, 2.0, 1e-3, eo);
    std::vector<double> t, x;
    for (const auto& s : ts.snapshots) {
        t.push_back(s.t);
        x.push_back(peak_position(g, s.q));
    }
    const double speed = fit_slope(t, x);
    o.at_most("speed_err", std::abs(speed - 2.0) / 2.0, 1e-2);
    const EvolutionReport rs = scattering_evolution_check(ts);
    o.at_most("soliton_mass", rs.mass_drift, 1e-5);
    o.at_most("soliton_H", rs.hamiltonian_drift, 1e-5);

    eo.beta_lambdas = {0.2, 0.5, 0.8};
    eo.track_spectrum = true;
    eo.track_gamma = true;
    // fast 1/x^3 decay with a negative eigenvalue; the flow focuses, so stay on [0, 1]
    const Trajectory tg = evolve(g, rational_hardy(g, 3.0 * kPi, 3.0, 0.0, 3), 1.0, 1e-3, eo);
    const EvolutionReport r = scattering_evolution_check(tg);
    o.at_most("mass", r.mass_drift, 1e-5);
    o.at_most("H", r.hamiltonian_drift, 1e-5);
    o.at_most("|beta|_drift", r.beta_modulus_drift, 1e-3);
    o.at_most("phase_slope_err", r.phase_slope_error, 2e-2);
    o.at_most("eig_drift", r.eigenvalue_drift, 5e-3);
    o.at_most("gamma_slope_err", r.gamma_slope_error, 2e-2);
    for (size_t i = 0; i < r.phase_slopes.size(); ++i) o.note("phase_slope_" + std::to_string(i), r.phase_slopes[i]);
    for (double s : r.gamma_slopes) o.note("gamma_slope", s);
    o.note("lambda_1", tg.snapshots.front().eigenvalues.empty() ? 0.0 : tg.snapshots.front().eigenvalues[0]);
    o.note("Gamma_drift", r.Gamma_drift);
}

// 12. Residue and gamma
void criterion12(Outcome& o) {
    const Grid g(kL, kN);
    Cached& c = cached("rat2", kN);
    o.require(c.spec.count() == 1, "count", c.spec.count(), 1);
    if (c.spec.count() < 1) return;
    const double gap = spectral_gap(*c.lg, c.spec.pairs[0].lambda);
    GammaOptions a, b;
    a.delta0 = 0.1 * gap;
    b.delta0 = 0.05 * gap;
    const GammaExtraction ea = extract_gamma(g, *c.lg, c.spec, 0, a);
    const GammaExtraction eb = extract_gamma(g, *c.lg, c.spec, 0, b);
    o.at_most("residue_err", ea.residue_error, 1e-2);
    o.at_most("gamma_repro", std::abs(ea.gamma - eb.gamma), 1e-3);
    o.note("gamma_re", ea.gamma.real());
}

}  // namespace

int main(int argc, char** argv) {
    const std::vector<std::pair<const char*, std::function<void(Outcome&)>>> all = {
        {"soliton suite", criterion1},        {"free field", criterion2},
        {"unimodularity", criterion3},        {"identity suite", criterion4},
        {"first trace formula", criterion5},  {"higher trace formulas", criterion6},
        {"resolvent trace", criterion7},      {"high-energy asymptotics", criterion8},
        {"distorted transform", criterion9},  {"reconstruction", criterion10},
        {"evolution", criterion11},           {"residue and gamma", criterion12},
    };
    std::vector<int> which;
    for (int i = 1; i < argc; ++i) which.push_back(std::atoi(argv[i]));
    int failed = 0;
    for (size_t i = 0; i < all.size(); ++i) {
        const int id = static_cast<int>(i) + 1;
        if (!which.empty() && std::find(which.begin(), which.end(), id) == which.end()) continue;
        Outcome o;
        const auto t0 = std::chrono::steady_clock::now();
        try {
            all[i].second(o);
        } catch (const std::exception& e) {
            o.pass = false;
            o.detail << " exception: " << e.what();
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        failed += o.pass ? 0 : 1;
        std::printf("%s criterion %2d (%s) [%.1fs]:%s\n", o.pass ? "PASS" : "FAIL", id, all[i].first, secs,
                    o.detail.str().c_str());
        std::fflush(stdout);
    }
    return failed == 0 ? 0 : 1;
}
