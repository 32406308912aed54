#include "cmscat/grid.hpp"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <memory>
#include <mutex>

#include "cmscat/errors.hpp"

namespace cmscat {

namespace {

// FFTW planning is not thread safe; execution on a plan's own buffer is,
// as long as each thread has its own plan. Plans are cached per thread.
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

struct Plan {
    explicit Plan(int n) : n(n) {
        buf = fftw_alloc_complex(n);
        std::lock_guard<std::mutex> lock(planner_mutex());
        fwd = fftw_plan_dft_1d(n, buf, buf, FFTW_FORWARD, FFTW_ESTIMATE);
        bwd = fftw_plan_dft_1d(n, buf, buf, FFTW_BACKWARD, FFTW_ESTIMATE);
    }
    ~Plan() {
        std::lock_guard<std::mutex> lock(planner_mutex());
        fftw_destroy_plan(fwd);
        fftw_destroy_plan(bwd);
        fftw_free(buf);
    }
    Plan(const Plan&) = delete;
    Plan& operator=(const Plan&) = delete;

    int n;
    fftw_complex* buf;
    fftw_plan fwd;
    fftw_plan bwd;
};

Plan& plan_for(int n) {
    thread_local std::map<int, std::unique_ptr<Plan>> cache;
    auto& p = cache[n];
    if (!p) p = std::make_unique<Plan>(n);
    return *p;
}

CVec run(const CVec& in, bool forward) {
    const int n = static_cast<int>(in.size());
    Plan& p = plan_for(n);
    auto* b = reinterpret_cast<cplx*>(p.buf);
    std::copy(in.data(), in.data() + n, b);
    fftw_execute(forward ? p.fwd : p.bwd);
    CVec out(n);
    std::copy(b, b + n, out.data());
    return out;
}

bool is_pow2(int n) { return n > 0 && (n & (n - 1)) == 0; }

// Multiply DFT coefficients by a real weight depending on frequency.
template <class W>
CVec mode_filter(const Grid& g, const CVec& f, W weight) {
    CVec F = fft(f);
    for (int m = 0; m < g.N(); ++m) F[m] *= weight(g.xi(m), m);
    return ifft(F);
}

}  // namespace

Grid::Grid(double L, int N) : L_(L), N_(N) {
    if (!(L > 0.0) || !std::isfinite(L)) throw ConfigError("grid half-width L must be positive");
    if (N < 16 || !is_pow2(N)) throw ConfigError("grid point count N must be a power of two >= 16");
}

Grid make_grid(double L, int N) { return Grid(L, N); }

RVec Grid::xs() const {
    RVec v(N_);
    for (int i = 0; i < N_; ++i) v[i] = x(i);
    return v;
}

RVec Grid::freqs() const {
    RVec v(N_);
    for (int m = 0; m < N_; ++m) v[m] = xi(m);
    return v;
}

CVec fft(const CVec& f) { return run(f, true); }

CVec ifft(const CVec& F) { return run(F, false) / static_cast<double>(F.size()); }

CVec fourier_forward(const Grid& g, const CVec& f) {
    CVec F = fft(f);
    const double c = g.dx() / std::sqrt(2.0 * kPi);
    for (int m = 0; m < g.N(); ++m) F[m] *= c * std::exp(-kI * g.xi(m) * g.x(0));
    return F;
}

CVec fourier_inverse(const Grid& g, const CVec& F) {
    CVec G(g.N());
    for (int m = 0; m < g.N(); ++m) G[m] = F[m] * std::exp(kI * g.xi(m) * g.x(0));
    return ifft(G) * (std::sqrt(2.0 * kPi) / g.dx());
}

CVec cplus(const Grid& g, const CVec& f) {
    return mode_filter(g, f, [&](double, int m) { return m == 0 ? 0.5 : (m < g.N() / 2 ? 1.0 : 0.0); });
}

CVec cminus(const Grid& g, const CVec& f) {
    return mode_filter(g, f, [&](double, int m) { return m == 0 ? 0.5 : (m < g.N() / 2 ? 0.0 : 1.0); });
}

CVec hardy_project(const Grid& g, const CVec& f) {
    return mode_filter(g, f, [&](double, int m) { return m < g.N() / 2 ? 1.0 : 0.0; });
}

CVec c_lambda(const Grid& g, const CVec& f, double lam) {
    const double tol = 1e-9 * g.dxi();
    return mode_filter(g, f, [&](double xi, int) {
        if (lam <= 0.0) return 0.0;
        if (std::abs(xi) < tol || std::abs(xi + lam) < tol) return 0.5;
        return (xi < 0.0 && xi > -lam) ? 1.0 : 0.0;
    });
}

double hardy_residual(const Grid& g, const CVec& f) {
    CVec F = fft(f);
    double neg = 0.0, tot = 0.0;
    for (int m = 0; m < g.N(); ++m) {
        const double a = std::norm(F[m]);
        tot += a;
        if (m >= g.N() / 2) neg += a;
    }
    return tot > 0.0 ? std::sqrt(neg / tot) : 0.0;
}

HardyFunction make_hardy(const Grid& g, const CVec& f) {
    if (f.size() != g.N()) throw ConfigError("sample count does not match grid");
    HardyFunction h{g, hardy_project(g, f), 0.0};
    h.hardy_residual = hardy_residual(g, h.f);
    return h;
}

HardyFunction cauchy_szego(const GridFunction& f) {
    HardyFunction h{f.grid, cplus(f.grid, f.f), 0.0};
    h.hardy_residual = hardy_residual(f.grid, h.f);
    return h;
}

CVec derivative(const Grid& g, const CVec& f) {
    CVec F = fft(f);
    for (int m = 0; m < g.N(); ++m) F[m] *= (m == g.N() / 2) ? cplx(0.0) : kI * g.xi(m);
    return ifft(F);
}

cplx inner(const Grid& g, const CVec& f, const CVec& h) {
    return g.dx() * (f.array() * h.array().conjugate()).sum();
}

double norm2(const Grid& g, const CVec& f) { return g.dx() * f.squaredNorm(); }

double norm_l2(const Grid& g, const CVec& f) { return std::sqrt(norm2(g, f)); }

cplx integrate(const Grid& g, const CVec& f) { return g.dx() * f.sum(); }

double weighted_norm(const Grid& g, const CVec& f, double s) {
    if (s < 0.0) throw ConfigError("weighted_norm needs s >= 0");
    double acc = 0.0;
    for (int i = 0; i < g.N(); ++i) acc += std::pow(1.0 + g.x(i) * g.x(i), s) * std::norm(f[i]);
    return std::sqrt(g.dx() * acc);
}

double boundary_magnitude(const CVec& f) {
    const double mx = f.cwiseAbs().maxCoeff();
    if (mx == 0.0) return 0.0;
    return std::max(std::abs(f[0]), std::abs(f[f.size() - 1])) / mx;
}

double spectral_tail(const Grid& g, const CVec& f) {
    CVec F = fft(f);
    const int n = g.N() / 2;
    double top = 0.0, mx = 0.0;
    for (int m = 0; m < n; ++m) {
        mx = std::max(mx, std::abs(F[m]));
        if (m >= n - n / 8) top = std::max(top, std::abs(F[m]));
    }
    return mx > 0.0 ? top / mx : 0.0;
}

CVec plane_wave(const Grid& g, cplx k) {
    CVec e(g.N());
    for (int i = 0; i < g.N(); ++i) e[i] = std::exp(kI * k * g.x(i));
    return e;
}

}  // namespace cmscat
