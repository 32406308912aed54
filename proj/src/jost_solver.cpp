#include "cmscat/jost_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "cmscat/errors.hpp"
#include "cmscat/lax_spectrum.hpp"
#include "cmscat/linalg.hpp"

namespace cmscat {

namespace {

// x = b + A x, written in the variable the solver iterates on. On the real
// axis that is the gauge n = conj(e_lam) m, which keeps every intermediate
// smooth even when e^{i lam x} is poorly resolved by the grid.
struct FixedPoint {
    LinearOp A;
    CVec b;
    CVec phase;  // m = phase * x
};

FixedPoint me_system(const Grid& g, const CVec& q, double lam, Side side) {
    FixedPoint fp;
    fp.A = [g, q, lam, side](const CVec& n) { return gauged_K(g, lam, side, q, n); };
    fp.b = CVec::Ones(g.N());
    fp.phase = plane_wave(g, lam);
    return fp;
}

FixedPoint m0_system(const Grid& g, const CVec& q, const SpectralParam& p) {
    FixedPoint fp;
    const Side s = p.kernel_side();
    if (p.on_axis() && p.side != Side::OffAxis) {
        const double lam = p.k.real();
        fp.phase = plane_wave(g, lam);
        fp.A = [g, q, lam, s](const CVec& n) { return gauged_K(g, lam, s, q, n); };
        fp.b = fp.phase.conjugate().cwiseProduct(r0(g, p.k, s, q));
    } else {
        const cplx k = p.k;
        fp.phase = CVec::Ones(g.N());
        fp.A = [g, q, k, s](const CVec& m) {
            return r0(g, k, s, q.cwiseProduct(cplus(g, q.conjugate().cwiseProduct(m))));
        };
        fp.b = r0(g, k, s, q);
    }
    return fp;
}

double sup_residual(const FixedPoint& fp, const CVec& x) {
    return (x - fp.A(x) - fp.b).cwiseAbs().maxCoeff();
}

void check_exclusion(const Grid& g, cplx k, const JostOptions& opt) {
    const double r = opt.exclusion(g);
    for (double lj : opt.eigenvalues) {
        if (std::abs(k - lj) < r) {
            std::ostringstream os;
            os << "spectral parameter " << k.real() << (k.imag() < 0 ? "" : "+") << k.imag()
               << "i lies within " << r << " of the eigenvalue " << lj;
            throw ExceptionalPointError(os.str());
        }
    }
}

SolverPath choose(const Grid& g, const FixedPoint& fp, const JostOptions& opt) {
    if (opt.force_path) return *opt.force_path;
    const double est = power_norm_estimate(fp.A, g.N(), 8, opt.seed);
    if (est < 0.5) return SolverPath::Neumann;
    // Volterra-dominated systems (large lam) have a small spectral radius
    // but a large norm; probe the Neumann terms directly.
    const double target = 1e-3 * opt.solve_tol * (1.0 + fp.b.cwiseAbs().maxCoeff());
    CVec term = fp.b;
    for (int it = 0; it < std::min(60, opt.neumann_max_terms); ++it) {
        term = fp.A(term);
        if (term.cwiseAbs().maxCoeff() < target) return SolverPath::Neumann;
    }
    return g.N() <= opt.dense_max_n ? SolverPath::Dense : SolverPath::Gmres;
}

JostSolution run(const Grid& g, const FixedPoint& fp, SolverPath path, const JostOptions& opt) {
    const int N = g.N();
    JostSolution sol;
    sol.path = path;
    CVec x;
    const double tol = opt.solve_tol * (1.0 + fp.b.cwiseAbs().maxCoeff());
    LinearOp one_minus_A = [&fp](const CVec& v) { return CVec(v - fp.A(v)); };

    if (path == SolverPath::Neumann) {
        x = fp.b;
        CVec term = fp.b;
        double prev = std::numeric_limits<double>::infinity();
        int rising = 0;
        bool ok = false;
        for (int it = 1; it <= opt.neumann_max_terms; ++it) {
            term = fp.A(term);
            x += term;
            sol.iterations = it;
            const double inc = term.cwiseAbs().maxCoeff();
            if (inc < 1e-3 * tol) {
                ok = true;
                break;
            }
            rising = inc > prev ? rising + 1 : 0;
            prev = inc;
            if (rising >= 5) break;
        }
        if (!ok) {
            // Neumann series is not contracting here; hand over to Krylov.
            sol.path = SolverPath::Gmres;
            path = SolverPath::Gmres;
        }
    }
    if (path == SolverPath::Dense) {
        if (N > opt.dense_cap_n)
            throw SolverError("dense path is capped at N = " + std::to_string(opt.dense_cap_n), 0.0);
        CMat A(N, N);
        CVec e = CVec::Zero(N);
        for (int j = 0; j < N; ++j) {
            e[j] = 1.0;
            A.col(j) = one_minus_A(e);
            e[j] = 0.0;
        }
        double rcond = 0.0;
        x = lu_solve(A, fp.b, &rcond);
        sol.iterations = 1;
        if (rcond < 1e-14) throw SolverError("dense Jost system is numerically singular", 1.0 / rcond);
    }
    if (path == SolverPath::Gmres) {
        GmresResult r = gmres(one_minus_A, fp.b, CVec(), opt.gmres_rtol, opt.gmres_restart, opt.gmres_max_iter);
        x = r.x;
        sol.iterations += r.iterations;
    }
    sol.residual = sup_residual(fp, x);
    if (!(sol.residual <= tol)) {
        std::ostringstream os;
        os << "Jost solve (" << path_name(sol.path) << ") did not reach tolerance: residual " << sol.residual
           << " > " << tol;
        const double cond = x.cwiseAbs().maxCoeff() / std::max(1e-300, fp.b.cwiseAbs().maxCoeff());
        throw SolverError(os.str(), cond);
    }
    sol.m = fp.phase.cwiseProduct(x);
    return sol;
}

}  // namespace

std::string path_name(SolverPath p) {
    switch (p) {
        case SolverPath::Dense: return "dense";
        case SolverPath::Neumann: return "neumann";
        default: return "gmres";
    }
}

SolverPath parse_path(const std::string& s) {
    if (s == "dense") return SolverPath::Dense;
    if (s == "neumann") return SolverPath::Neumann;
    if (s == "gmres") return SolverPath::Gmres;
    throw ConfigError("unknown solver path '" + s + "'");
}

JostSolution solve_me(const Grid& g, const CVec& q, double lam, Side side, const JostOptions& opt) {
    if (lam < 0.0) throw ContractError("m_e is defined for lam >= 0");
    if (side == Side::OffAxis) throw ContractError("m_e needs a boundary side");
    check_exclusion(g, lam, opt);
    const SpectralParam p = SpectralParam::axis(lam, side);
    FixedPoint fp = me_system(g, q, lam, side);
    JostSolution sol = run(g, fp, choose(g, fp, opt), opt);
    sol.param = p;
    // m - e^{i lam x} must vanish at the incoming end. The lower-side
    // integral at the last sample still spans one cell, hence the dx term.
    const int edge = side == Side::Upper ? 0 : g.N() - 1;
    const double tail = std::abs(sol.m[edge] - std::exp(kI * lam * g.x(edge)));
    const double mmax = sol.m.cwiseAbs().maxCoeff();
    sol.boundary_ok = tail <= opt.boundary_tol * std::max(1.0, mmax) + 2.0 * g.dx() * std::norm(q[edge]) * mmax;
    return sol;
}

JostSolution solve_m0(const Grid& g, const CVec& q, const SpectralParam& p, const JostOptions& opt) {
    p.validate();
    check_exclusion(g, p.k, opt);
    FixedPoint fp = m0_system(g, q, p);
    JostSolution sol = run(g, fp, choose(g, fp, opt), opt);
    sol.param = p;
    if (!p.on_axis()) {
        const double mx = std::max(1e-300, sol.m.cwiseAbs().maxCoeff());
        const double edge = std::max(std::abs(sol.m[0]), std::abs(sol.m[g.N() - 1]));
        sol.boundary_ok = edge <= std::max(opt.boundary_tol, 10.0 * boundary_magnitude(q)) * mx;
    }
    return sol;
}

SolverPath solve_strategy(const Grid& g, const CVec& q, const SpectralParam& p, const JostOptions& opt) {
    p.validate();
    FixedPoint fp = m0_system(g, q, p);
    return choose(g, fp, opt);
}

std::vector<CVec> c_sequence(const Grid& g, const CVec& q, int n_max, std::vector<std::string>* warnings) {
    if (n_max < 1) throw ConfigError("c_sequence needs n_max >= 1");
    if (warnings && spectral_tail(g, q) > 1e-10) {
        std::ostringstream os;
        os << "q is not spectrally resolved (tail " << spectral_tail(g, q) << "); c_n lose accuracy";
        warnings->push_back(os.str());
    }
    std::vector<CVec> c;
    c.push_back(hardy_project(g, CVec(-q)));
    for (int n = 1; n < n_max; ++n) c.push_back(apply_lax(g, q, c.back()));
    return c;
}

CVec c_expansion(const std::vector<CVec>& c, cplx k, int M) {
    CVec s = CVec::Zero(c.front().size());
    cplx kn = 1.0;
    for (int n = 1; n <= M && n <= static_cast<int>(c.size()); ++n) {
        kn *= k;
        s += c[n - 1] / kn;
    }
    return s;
}

}  // namespace cmscat
